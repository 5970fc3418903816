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

#include <random>

#include "dcsim/trace.hpp"
#include "test_support.hpp"

namespace dcsim {
namespace {

Error parse_error(std::string_view text) {
  try {
    parse_trace(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "parsed: " << text;
  return Error(Errc::Io, "none");
}

TEST(TraceTest, ParsesEachKind) {
  const auto reqs = parse_trace(
      "# comment\n"
      "LD 0000008000b010 8\n"
      "\n"
      "ST 10 4 deadbeef   # trailing comment\n"
      "AMO add 20 0500000000000000\n"
      "flush\n");
  ASSERT_EQ(reqs.size(), 4u);
  EXPECT_EQ(reqs[0], CpuRequest::load(0x0000008000b010, 8));
  EXPECT_EQ(reqs[1], CpuRequest::store(0x10, {0xde, 0xad, 0xbe, 0xef}));
  EXPECT_EQ(reqs[2], CpuRequest::amo(AmoOp::Add, 0x20, 5));
  EXPECT_EQ(reqs[3], CpuRequest::flush());
}

TEST(TraceTest, CommentOnlyIsEmpty) {
  EXPECT_TRUE(parse_trace("# comment\n").empty());
  EXPECT_TRUE(parse_trace("").empty());
}

TEST(TraceTest, ErrorsCarryLineNumbers) {
  struct Case {
    const char* text;
    Errc code;
    std::size_t line;
  };
  for (const Case& c : {Case{"LD 10 8\nLD zz 8\n", Errc::SyntaxError, 2},
                        Case{"LD 10 3\n", Errc::BadSize, 1},
                        Case{"\n\nLD 11 8\n", Errc::BadAlignment, 3},
                        Case{"ST 10 4 dead\n", Errc::SyntaxError, 1},
                        Case{"AMO nand 10 0000000000000000\n", Errc::UnknownOp, 1},
                        Case{"AMO add 14 0000000000000000\n", Errc::BadAlignment, 1},
                        Case{"JMP 10\n", Errc::SyntaxError, 1},
                        Case{"FLUSH now\n", Errc::SyntaxError, 1},
                        Case{"LD 10\n", Errc::SyntaxError, 1}}) {
    const Error e = parse_error(c.text);
    EXPECT_EQ(e.code(), c.code) << c.text;
    EXPECT_EQ(e.line(), c.line) << c.text;
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(c.line)), std::string::npos);
  }
}

TEST(TraceTest, FormatsFixedWidthAddresses) {
  EXPECT_EQ(format_request(CpuRequest::load(0x0000008000b010, 8)), "LD 0000008000b010 8");
  EXPECT_EQ(format_request(CpuRequest::store(0x10, {0xde, 0xad})), "ST 00000000000010 2 dead");
  EXPECT_EQ(format_request(CpuRequest::amo(AmoOp::Maxu, 0x20, 1)), "AMO MAXU 00000000000020 0100000000000000");
}

TEST(TraceTest, ParseOfFormatIsIdentity) {
  std::mt19937_64 rng(71);
  const CacheConfig cfg;
  for (int i = 0; i < 200; ++i) {
    const auto pool = testing::random_pool(rng, cfg, 3, 5);
    const auto reqs = testing::random_trace(rng, cfg, pool, 200, {0.4, 0.4, 0.1, 0.1});
    ASSERT_EQ(parse_trace(format_trace(reqs)), reqs);
  }
}

TEST(TraceTest, MissingFileIsAnIoError) {
  try {
    load_trace_file("/nonexistent/t.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/t.txt"), std::string::npos);
  }
}

}  // namespace
}  // namespace dcsim
