// Copyright 2026 The adaptkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adaptkit/util.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "adaptkit/rng.hpp"
#include "doctest.h"

using namespace adaptkit;

TEST_SUITE("util") {

TEST_CASE("format_fixed rounds half up") {
  CHECK(format_fixed(28.65, 1) == "28.7");
  CHECK(format_fixed(2.25, 1) == "2.3");
  CHECK(format_fixed(-1.0, 2) == "-1.00");
  CHECK(format_fixed(0.0, 1) == "0.0");
  CHECK(format_fixed(100.0, 1) == "100.0");
}

TEST_CASE("format_logprob keeps 12 significant digits") {
  // 12 digits cannot reproduce every double bit for bit, but the parse-back
  // error must stay below the documented round-trip tolerance
  for (double v : {-0.301029995663981195, -99.0, 1.0 / 3.0, -1e-13}) {
    CHECK(std::stod(format_logprob(v)) == doctest::Approx(v).epsilon(1e-11));
  }
  CHECK(format_logprob(0.0) == "0");
  CHECK(format_logprob(-99.0) == "-99");
  CHECK(format_logprob(-0.30103) == "-0.30103");
  CHECK(format_logprob(-0.0) == "0");  // no negative zero in output
}

TEST_CASE("split and join") {
  CHECK(split_ws("  a\tb  c ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_ws("") == std::vector<std::string>{});
  CHECK(split_ws("   ") == std::vector<std::string>{});
  CHECK(join({"a", "b"}, " ") == "a b");
  CHECK(join({}, " ") == "");
}

TEST_CASE("for_each_line strips carriage returns") {
  std::istringstream in("one\r\ntwo\nthree");
  std::vector<std::string> lines;
  for_each_line(in, [&](const std::string& l) { lines.push_back(l); });
  CHECK(lines == std::vector<std::string>{"one", "two", "three"});
}

TEST_CASE("atomic_write replaces content completely") {
  auto dir = std::filesystem::temp_directory_path() / "adaptkit_util_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "f.txt").string();
  atomic_write(path, "first version, quite long\n");
  atomic_write(path, "second\n");
  CHECK(read_file(path) == "second\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("rng is deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.next_below(10) < 10);
    double d = r.next_double();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
  }
}

TEST_CASE("rng shuffle is a permutation") {
  Rng r(3);
  std::vector<std::size_t> v(50);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  auto original = v;
  r.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == original);
  CHECK(v != original);  // astronomically unlikely to be identity
}

}  // TEST_SUITE
