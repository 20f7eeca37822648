#include <doctest.h>

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "newsgraph/calendar.hpp"
#include "newsgraph/date.hpp"
#include "newsgraph/labeling.hpp"
#include "newsgraph/num_format.hpp"
#include "newsgraph/rng.hpp"
#include "newsgraph/sha256.hpp"
#include "newsgraph/types.hpp"

using namespace newsgraph;

TEST_CASE("date round trips and arithmetic") {
  const Date d = Date::parse("2021-03-15");
  CHECK(d.to_string() == "2021-03-15");
  CHECK(Date::from_ymd(2021, 3, 15) == d);
  CHECK(d.plus_days(17).to_string() == "2021-04-01");
  CHECK(Date::parse("1970-01-01").serial() == 0);
  CHECK(Date::parse("2020-02-29").to_string() == "2020-02-29");  // leap day
  CHECK(Date::parse("2020-02-29").plus_days(1).to_string() == "2020-03-01");
  CHECK(Date::parse("2000-02-29").plus_days(366).to_string() == "2001-03-01");
}

TEST_CASE("date ordering and weekday") {
  CHECK(Date::parse("2021-01-01") < Date::parse("2021-01-02"));
  // 2020-01-06 was a Monday, 2020-01-11 a Saturday
  CHECK_FALSE(Date::parse("2020-01-06").is_weekend());
  CHECK(Date::parse("2020-01-11").is_weekend());
  CHECK(Date::parse("2020-01-12").is_weekend());
  CHECK(Date::parse("2020-01-06").weekday() == std::chrono::Monday);
}

TEST_CASE("date parse rejects malformed input") {
  for (const char* bad : {"2021-13-01", "2021-00-10", "2021-02-30", "21-01-01", "2021/01/01",
                          "2021-1-1", "", "2021-01-01x"})
    CHECK_THROWS_AS(Date::parse(bad), std::invalid_argument);
}

TEST_CASE("sha256 matches published vectors") {
  // FIPS 180-2 examples
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("splitmix64 reproduces the reference stream") {
  Rng r0(0);
  CHECK(r0.next_u64() == 0xe220a8397b1dcdafull);
  CHECK(r0.next_u64() == 0x6e789e6aa1b965f4ull);
  Rng r(42);
  CHECK(r.next_u64() == 0xbdd732262feb6e95ull);
  CHECK(r.next_u64() == 0x28efe333b266f103ull);
  CHECK(r.next_u64() == 0x47526757130f9f52ull);
  CHECK(r.next_u64() == 0x581ce1ff0e4ae394ull);
}

TEST_CASE("rng determinism and ranges") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = r.next_below(17);
    CHECK(k < 17);
    const double v = r.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("rng shuffle is a permutation and normal is roughly standard") {
  Rng r(99);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
  auto shuffled = v;
  r.shuffle(shuffled);
  CHECK(shuffled != v);  // astronomically unlikely to be identity
  auto sorted = shuffled;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == v);

  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.05);
  CHECK(std::fabs(var - 1.0) < 0.05);
}

TEST_CASE("ticker validation") {
  CHECK(Ticker::valid_symbol("A"));
  CHECK(Ticker::valid_symbol("MSFT"));
  CHECK(Ticker::valid_symbol("ABCDEF"));
  CHECK_FALSE(Ticker::valid_symbol(""));
  CHECK_FALSE(Ticker::valid_symbol("ABCDEFG"));
  CHECK_FALSE(Ticker::valid_symbol("msft"));
  CHECK_FALSE(Ticker::valid_symbol("BRK.B"));
  CHECK_FALSE(Ticker::valid_symbol("A B"));
  CHECK_THROWS(Ticker("bad!"));
  CHECK(Ticker("IBM").str() == "IBM");
}

TEST_CASE("movement and sentiment string round trips") {
  for (auto m : {MovementLabel::Down, MovementLabel::Neutral, MovementLabel::Up})
    CHECK(movement_from_string(to_string(m)) == m);
  for (auto s : {Sentiment::Positive, Sentiment::Negative, Sentiment::Neutral})
    CHECK(sentiment_from_string(to_string(s)) == s);
  CHECK_THROWS(movement_from_string("sideways"));
  CHECK_THROWS(sentiment_from_string("mixed"));
}

TEST_CASE("class order is Down < Neutral < Up") {
  CHECK(static_cast<int>(MovementLabel::Down) == 0);
  CHECK(static_cast<int>(MovementLabel::Neutral) == 1);
  CHECK(static_cast<int>(MovementLabel::Up) == 2);
}

TEST_CASE("compute_return basics") {
  CHECK(compute_return(102.0, 100.0) == doctest::Approx(0.02));
  CHECK(compute_return(95.0, 100.0) == doctest::Approx(-0.05));
  CHECK(compute_return(100.0, 100.0) == 0.0);
  CHECK_THROWS_AS(compute_return(100.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(compute_return(100.0, -1.0), std::domain_error);
}

TEST_CASE("label_movement boundary grid") {
  const double rs[] = {-0.02, -0.01, -0.009, 0.0, 0.009, 0.01, 0.02};
  const MovementLabel want[] = {MovementLabel::Down,    MovementLabel::Down,
                                MovementLabel::Neutral, MovementLabel::Neutral,
                                MovementLabel::Neutral, MovementLabel::Up,
                                MovementLabel::Up};
  for (int i = 0; i < 7; ++i) CHECK(label_movement(rs[i]) == want[i]);
  CHECK_THROWS_AS(label_movement(std::nan("")), std::domain_error);
}

TEST_CASE("label_movement honors custom thresholds") {
  const Thresholds th{0.05, -0.03};
  CHECK(label_movement(0.05, th) == MovementLabel::Up);
  CHECK(label_movement(0.049, th) == MovementLabel::Neutral);
  CHECK(label_movement(-0.03, th) == MovementLabel::Down);
  CHECK(label_movement(-0.029, th) == MovementLabel::Neutral);
  CHECK_THROWS(Thresholds{-0.01, 0.01}.validate());  // up must sit above down
}

TEST_CASE("trading calendar navigation") {
  std::vector<Bar> bars;
  for (const char* d : {"2021-01-06", "2021-01-04", "2021-01-08", "2021-01-04"}) {
    Bar b;
    b.ticker = Ticker("IBM");
    b.date = Date::parse(d);
    b.open = b.close = b.high = b.low = b.ask = b.bid = 10;
    b.volume = 1;
    bars.push_back(b);
  }
  const auto cal = TradingCalendar::from_bars(bars);
  CHECK(cal.size() == 3);  // duplicate collapsed
  CHECK(cal.first() == Date::parse("2021-01-04"));
  CHECK(cal.last() == Date::parse("2021-01-08"));
  CHECK(cal.contains(Date::parse("2021-01-06")));
  CHECK_FALSE(cal.contains(Date::parse("2021-01-05")));
  CHECK(cal.index_of(Date::parse("2021-01-06")) == 1);
  CHECK(cal.next_after(Date::parse("2021-01-04")) == Date::parse("2021-01-06"));
  CHECK(cal.next_after(Date::parse("2021-01-05")) == Date::parse("2021-01-06"));
  CHECK(cal.prev_before(Date::parse("2021-01-08")) == Date::parse("2021-01-06"));
  CHECK_THROWS_AS(cal.next_after(Date::parse("2021-01-08")), std::out_of_range);
  CHECK_THROWS_AS(cal.prev_before(Date::parse("2021-01-04")), std::out_of_range);
  CHECK_THROWS_AS(cal.index_of(Date::parse("2021-01-05")), std::out_of_range);
}

TEST_CASE("bar validation rejects inverted ranges") {
  Bar b;
  b.ticker = Ticker("IBM");
  b.date = Date::parse("2021-01-04");
  b.open = 10;
  b.close = 11;
  b.high = 12;
  b.low = 9;
  b.ask = 11.1;
  b.bid = 10.9;
  b.volume = 100;
  CHECK_NOTHROW(b.validate());
  auto bad = b;
  bad.high = 8;  // below low
  CHECK_THROWS(bad.validate());
  bad = b;
  bad.low = -1;
  CHECK_THROWS(bad.validate());
  bad = b;
  bad.volume = -5;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(format_double(0.0) == "0");
  Rng r(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = (r.next_unit() - 0.5) * std::pow(10.0, r.uniform(-8, 8));
    const std::string s = format_double(x);
    double back = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(res.ec == std::errc());
    CHECK(back == x);  // bit-exact reparse
  }
}
