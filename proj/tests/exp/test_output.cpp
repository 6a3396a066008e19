#include <atomic>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "rcfd/exp/csv.hpp"
#include "rcfd/exp/pool.hpp"

using namespace rcfd::exp;

TEST_CASE("six significant digits")
{
  CHECK(fmt6(0.123456789) == "0.123457");
  CHECK(fmt6(1.85676) == "1.85676");
  CHECK(fmt6(1234567) == "1.23457e+06");
  CHECK(fmt6(1e-7) == "1e-07");
  CHECK(fmt6(0) == "0");
}

TEST_CASE("fields are quoted only when needed")
{
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("metadata block, header, rows")
{
  CsvTable t;
  t.meta = {"figure x", "config n = 2"};
  t.header = {"a", "b"};
  t.rows = {{"1", "x,y"}, {"2", ""}};
  std::ostringstream os;
  t.write(os);
  CHECK(os.str() == "# figure x\r\n# config n = 2\r\na,b\r\n1,\"x,y\"\r\n2,\r\n");
  CHECK(t.data_text() == "a,b\r\n1,\"x,y\"\r\n2,\r\n");
}

TEST_CASE("the pool keeps index order and isolates failures")
{
  for (int jobs : {1, 3, 8}) {
    std::vector<int> out(50, -1);
    const auto errors = run_indexed(out.size(), jobs, [&](std::size_t i) {
      if (i % 7 == 3) {
        throw std::runtime_error("point " + std::to_string(i));
      }
      out[i] = static_cast<int>(i * i);
    });
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i % 7 == 3) {
        CHECK(errors[i] != nullptr);
        CHECK(out[i] == -1);
      } else {
        CHECK(errors[i] == nullptr);
        CHECK(out[i] == static_cast<int>(i * i));
      }
    }
  }
}

TEST_CASE("the pool never exceeds its bound")
{
  std::atomic<int> live{0};
  std::atomic<int> peak{0};
  run_indexed(40, 3, [&](std::size_t) {
    const int now = ++live;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    --live;
  });
  CHECK(peak.load() <= 3);
  CHECK(worker_count(3, 2) == 2);
  CHECK(worker_count(0, 100) >= 1);
}
