/*
 * Copyright 2026 The dcsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <numeric>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "dcsim/cache_memory.hpp"

namespace dcsim {
namespace {

std::vector<std::uint8_t> iota_line(std::uint8_t first) {
  std::vector<std::uint8_t> v(16);
  std::iota(v.begin(), v.end(), first);
  return v;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Io;
}

class CacheMemoryTest : public ::testing::Test {
 protected:
  CacheConfig cfg;
  CacheMemory mem{cfg};
};

TEST_F(CacheMemoryTest, WorkedLookupFindsWaySeven) {
  const DecomposedAddress d = decompose(0x0000008000b010, cfg);
  mem.fill_line(d.index, 7, d.tag, iota_line(0));
  const Lookup lk = mem.lookup(1, 0x0000008000b);
  ASSERT_TRUE(lk.hit());
  EXPECT_EQ(*lk.way, 7u);
  EXPECT_EQ(bank_select(d.offset), 0u);
}

TEST_F(CacheMemoryTest, ColdLookupMissesWithEmptyMask) {
  const Lookup lk = mem.lookup(1, 0x0000008000b);
  EXPECT_FALSE(lk.hit());
  EXPECT_EQ(lk.valid_mask, 0u);
}

TEST_F(CacheMemoryTest, TwoTagsInOneSetHitDistinctWays) {
  mem.fill_line(1, 0, 0x0000008000b, iota_line(0));
  mem.fill_line(1, 1, 0x00000081234, iota_line(16));
  EXPECT_EQ(*mem.lookup(1, 0x0000008000b).way, 0u);
  EXPECT_EQ(*mem.lookup(1, 0x00000081234).way, 1u);
}

TEST_F(CacheMemoryTest, ReadBytesComesFromTheOwningBank) {
  mem.fill_line(1, 7, 0x0000008000b, iota_line(0x40));
  EXPECT_EQ(mem.read_bytes(1, 7, 0, 8), std::vector<std::uint8_t>({0x40, 0x41, 0x42, 0x43, 0x44, 0x45, 0x46, 0x47}));
  EXPECT_EQ(mem.read_bytes(1, 7, 8, 8), std::vector<std::uint8_t>({0x48, 0x49, 0x4a, 0x4b, 0x4c, 0x4d, 0x4e, 0x4f}));
  EXPECT_EQ(mem.read_bytes(1, 7, 12, 2), std::vector<std::uint8_t>({0x4c, 0x4d}));
  // Bank words as stored: the low half in bank 0, the high half in bank 1.
  EXPECT_EQ(mem.bank_word(0, 1, 7)[0], 0x40);
  EXPECT_EQ(mem.bank_word(1, 1, 7)[0], 0x48);
}

TEST_F(CacheMemoryTest, CrossBankAccessIsRejected) {
  mem.fill_line(0, 0, 5, iota_line(0));
  EXPECT_EQ(code_of([&] { mem.read_bytes(0, 0, 6, 4); }), Errc::UnalignedCrossBank);
  EXPECT_EQ(code_of([&] { mem.write_bytes(0, 0, 7, std::vector<std::uint8_t>(2)); }), Errc::UnalignedCrossBank);
}

TEST_F(CacheMemoryTest, InvalidWayIsRejected) {
  EXPECT_EQ(code_of([&] { mem.read_bytes(0, 0, 0, 8); }), Errc::InvalidWay);
  EXPECT_EQ(code_of([&] { mem.write_bytes(0, 3, 0, std::vector<std::uint8_t>(1)); }), Errc::InvalidWay);
}

TEST_F(CacheMemoryTest, FillOverwritesPreviousTag) {
  mem.fill_line(2, 3, 0xAA, iota_line(0));
  mem.fill_line(2, 3, 0xBB, iota_line(0));
  EXPECT_FALSE(mem.lookup(2, 0xAA).hit());
  EXPECT_TRUE(mem.lookup(2, 0xBB).hit());
}

TEST_F(CacheMemoryTest, FillRejectsDuplicateTagInSet) {
  mem.fill_line(2, 3, 0xAA, iota_line(0));
  EXPECT_EQ(code_of([&] { mem.fill_line(2, 4, 0xAA, iota_line(0)); }), Errc::DuplicateTag);
}

TEST_F(CacheMemoryTest, ValidMaskTracksFills) {
  EXPECT_EQ(mem.valid_mask(0), 0u);
  mem.fill_line(0, 3, 1, iota_line(0));
  EXPECT_EQ(mem.valid_mask(0), 0b00001000u);
  mem.fill_line(5, 0, 1, iota_line(0));
  mem.fill_line(5, 7, 2, iota_line(0));
  EXPECT_EQ(mem.valid_mask(5), 0b10000001u);
  for (unsigned w = 0; w < 8; ++w) mem.fill_line(9, w, 100 + w, iota_line(0));
  EXPECT_EQ(mem.valid_mask(9), 0xFFu);
}

TEST_F(CacheMemoryTest, WriteBytesTouchesOnlyItsBank) {
  mem.fill_line(4, 2, 0x77, iota_line(0));
  const std::vector<std::uint8_t> bank0(mem.bank_word(0, 4, 2).begin(), mem.bank_word(0, 4, 2).end());
  const std::vector<std::uint8_t> bank1(mem.bank_word(1, 4, 2).begin(), mem.bank_word(1, 4, 2).end());
  mem.write_bytes(4, 2, 8, std::vector<std::uint8_t>{0xde, 0xad, 0xbe, 0xef});
  const std::vector<std::uint8_t> after0(mem.bank_word(0, 4, 2).begin(), mem.bank_word(0, 4, 2).end());
  const std::vector<std::uint8_t> after1(mem.bank_word(1, 4, 2).begin(), mem.bank_word(1, 4, 2).end());
  EXPECT_EQ(after0, bank0);
  std::vector<std::uint8_t> expect1 = bank1;
  expect1[0] = 0xde;
  expect1[1] = 0xad;
  expect1[2] = 0xbe;
  expect1[3] = 0xef;
  EXPECT_EQ(after1, expect1);
  EXPECT_EQ(mem.read_bytes(4, 2, 8, 4), std::vector<std::uint8_t>({0xde, 0xad, 0xbe, 0xef}));
}

TEST_F(CacheMemoryTest, InvalidateAndFlush) {
  EXPECT_EQ(mem.flush_all(), 0u);
  mem.fill_line(0, 0, 1, iota_line(0));
  mem.fill_line(1, 1, 2, iota_line(0));
  mem.fill_line(2, 2, 3, iota_line(0));
  mem.invalidate(0, 0);
  EXPECT_FALSE(mem.lookup(0, 1).hit());
  mem.fill_line(0, 0, 1, iota_line(9));
  EXPECT_EQ(mem.flush_all(), 3u);
  EXPECT_EQ(mem.valid_lines(), 0u);
  // Data survives a flush; only valid bits are cleared.
  EXPECT_EQ(mem.bank_word(0, 0, 0)[0], 9);
}

TEST_F(CacheMemoryTest, RandomFillsKeepTagsUniqueAndRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t set = rng() % 4;
    const std::uint64_t tag = rng() % 12;
    const Lookup lk = mem.lookup(set, tag);
    const unsigned way = lk.hit() ? *lk.way : static_cast<unsigned>(rng() % 8);
    auto line = iota_line(static_cast<std::uint8_t>(rng()));
    mem.fill_line(set, way, tag, line);
    std::vector<std::uint8_t> back = mem.read_bytes(set, way, 0, 8);
    const auto hi = mem.read_bytes(set, way, 8, 8);
    back.insert(back.end(), hi.begin(), hi.end());
    ASSERT_EQ(back, line);
    for (std::uint64_t s = 0; s < 4; ++s) {
      std::set<std::uint64_t> tags;
      for (unsigned w = 0; w < 8; ++w) {
        const TagEntry& e = mem.tag_entry(s, w);
        if (e.valid) {
          ASSERT_TRUE(tags.insert(e.tag).second);
        }
      }
    }
    ASSERT_LE(mem.valid_lines(), cfg.num_sets * cfg.num_ways);
  }
}

TEST_F(CacheMemoryTest, DumpListsOneSetPerLine) {
  mem.fill_line(1, 7, 0x0000008000b, iota_line(0));
  const std::string dump = mem.dump_tags();
  EXPECT_EQ(std::count(dump.begin(), dump.end(), '\n'), 256);
  EXPECT_NE(dump.find("set 01: - - - - - - - 000000008000b\n"), std::string::npos);
  EXPECT_EQ(dump.substr(0, 24), "set 00: - - - - - - - -\n");
}

}  // namespace
}  // namespace dcsim
