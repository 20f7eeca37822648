#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "newsgraph/errors.hpp"
#include "newsgraph/infer/affected.hpp"
#include "newsgraph/infer/daily_graph.hpp"
#include "newsgraph/infer/prompt.hpp"
#include "newsgraph/infer/provider.hpp"

using namespace newsgraph;
using namespace newsgraph::infer;

namespace {

std::vector<Ticker> tickers(std::initializer_list<const char*> syms) {
  std::vector<Ticker> out;
  for (const char* s : syms) out.emplace_back(s);
  return out;
}

std::filesystem::path temp_dir(const char* tag) {
  auto p = std::filesystem::temp_directory_path() / (std::string("newsgraph_infer_") + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("prompt text matches the golden transcription byte for byte") {
  const auto got = render_prompt_text({"Boeing wins a major order", "Microsoft unveils new cloud tools"},
                                      tickers({"BA", "AMGN", "MSFT"}));
  const auto want = read_file(std::filesystem::path(NEWSGRAPH_TEST_DATA_DIR) / "prompt_golden.txt");
  REQUIRE(!want.empty());
  CHECK(got == want);
}

TEST_CASE("prompt flattens embedded newlines and validates input") {
  const auto text = render_prompt_text({"line one\r\nwrapped", "second"}, tickers({"AAPL"}));
  CHECK(text.find("line one  wrapped\nsecond") != std::string::npos);
  CHECK_THROWS_AS(render_prompt_text({}, tickers({"AAPL"})), std::domain_error);
  CHECK_THROWS_AS(render_prompt_text({"x"}, {}), std::domain_error);
  const auto req = build_prompt(Date::parse("2021-01-04"), {"x"}, tickers({"AAPL", "IBM"}));
  CHECK(req.date == Date::parse("2021-01-04"));
  CHECK(req.prompt_text.find("Target List: AAPL, IBM\n") != std::string::npos);
}

TEST_CASE("dow30 name table resolves paper-style company names") {
  const auto& names = NameTable::dow30();
  CHECK(names.resolve("Apple Inc.") == Ticker("AAPL"));
  CHECK(names.resolve("apple") == Ticker("AAPL"));
  CHECK(names.resolve("The Boeing Company") == Ticker("BA"));
  CHECK(names.resolve("JPMorgan Chase & Co.") == Ticker("JPM"));
  CHECK(names.resolve("JP Morgan") == Ticker("JPM"));
  CHECK(names.resolve("Wal-Mart") == Ticker("WMT"));
  CHECK(names.resolve("Walmart Inc") == Ticker("WMT"));
  CHECK(names.resolve("The Walt Disney Company") == Ticker("DIS"));
  CHECK(names.resolve("Salesforce.com") == Ticker("CRM"));
  CHECK_FALSE(names.resolve("Acme Widgets").has_value());
  const auto universe = dow30_universe();
  CHECK(universe.size() == 30);
  CHECK(std::is_sorted(universe.begin(), universe.end()));
}

TEST_CASE("parse_affected reads strict json") {
  const std::string raw =
      R"({"Affected Companies": {"AAPL": "positive", "Boeing": "negative", "MSFT": "neutral"}})";
  const auto entries = parse_affected(raw, dow30_universe());
  REQUIRE(entries.size() == 3);
  CHECK(entries[0] == std::pair{Ticker("AAPL"), Sentiment::Positive});
  CHECK(entries[1] == std::pair{Ticker("BA"), Sentiment::Negative});
  CHECK(entries[2] == std::pair{Ticker("MSFT"), Sentiment::Neutral});
}

TEST_CASE("parse_affected tolerates prose wrapping and bare keys") {
  // chat models often wrap the object and emit the paper's pseudo-JSON with
  // unquoted keys
  const std::string wrapped =
      "Sure! Here is the result:\n```json\n"
      R"({"Affected Companies": {AAPL: "positive", IBM: "negative"}})"
      "\n```\nLet me know if you need more.";
  const auto entries = parse_affected(wrapped, dow30_universe());
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].first == Ticker("AAPL"));
  CHECK(entries[1].first == Ticker("IBM"));
}

TEST_CASE("parse_affected drops unknown names and sentiments, keeps first duplicate") {
  // "AAPL" and "Apple Inc." resolve to the same ticker; the earlier entry wins
  const std::string raw =
      R"({"Affected Companies": {"AAPL": "positive", "Unknown Co": "positive",)"
      R"( "MSFT": "bullish", "Apple Inc.": "negative"}})";
  const auto entries = parse_affected(raw, dow30_universe());
  REQUIRE(entries.size() == 1);
  CHECK(entries[0] == std::pair{Ticker("AAPL"), Sentiment::Positive});
}

TEST_CASE("parse_affected restricts to the universe and fails without the key") {
  const std::string raw = R"({"Affected Companies": {"AAPL": "positive", "TSLA": "positive"}})";
  const auto entries = parse_affected(raw, tickers({"AAPL", "IBM"}));
  REQUIRE(entries.size() == 1);

  CHECK_THROWS_AS(parse_affected("no json here", dow30_universe()), ParseError);
  CHECK_THROWS_AS(parse_affected(R"({"Other": 1})", dow30_universe()), ParseError);
  CHECK_THROWS_AS(parse_affected(R"({"Affected Companies": "AAPL"})", dow30_universe()),
                  ParseError);
  try {
    parse_affected("garbage", dow30_universe());
  } catch (const ParseError& e) {
    CHECK(e.raw() == "garbage");
  }
}

TEST_CASE("daily graph is a clique over the affected set") {
  AffectedSet day;
  day.date = Date::parse("2021-01-04");
  day.entries = {{Ticker("BA"), Sentiment::Positive},
                 {Ticker("AMGN"), Sentiment::Negative},
                 {Ticker("MSFT"), Sentiment::Neutral}};
  const auto g = build_daily_graph(day, dow30_universe());
  CHECK(g.nodes.size() == 30);
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(Ticker("BA"), Ticker("AMGN")));
  CHECK(g.has_edge(Ticker("BA"), Ticker("MSFT")));
  CHECK(g.has_edge(Ticker("AMGN"), Ticker("MSFT")));
  CHECK(g.has_edge(Ticker("MSFT"), Ticker("AMGN")));  // symmetric view
  CHECK_FALSE(g.has_edge(Ticker("AAPL"), Ticker("BA")));
  CHECK(g.affected() == tickers({"AMGN", "BA", "MSFT"}));

  AffectedSet stranger;
  stranger.date = day.date;
  stranger.entries = {{Ticker("ZZZ"), Sentiment::Positive}};
  CHECK_THROWS_AS(build_daily_graph(stranger, dow30_universe()), std::domain_error);
}

TEST_CASE("adjacency lists index into the given order") {
  AffectedSet day;
  day.date = Date::parse("2021-01-04");
  day.entries = {{Ticker("C"), Sentiment::Positive}, {Ticker("A"), Sentiment::Positive}};
  const auto universe = tickers({"A", "B", "C"});
  const auto g = build_daily_graph(day, universe);
  const auto adj = adjacency(g, universe);
  REQUIRE(adj.size() == 3);
  CHECK(adj[0] == std::vector<int>{2});
  CHECK(adj[1].empty());
  CHECK(adj[2] == std::vector<int>{0});
}

TEST_CASE("graphs save/load round trip with validation") {
  const auto universe = tickers({"A", "B", "C"});
  std::vector<DailyGraph> graphs;
  for (int i = 0; i < 3; ++i) {
    AffectedSet day;
    day.date = Date::parse("2021-01-04").plus_days(i);
    if (i != 1)
      day.entries = {{Ticker("A"), Sentiment::Positive}, {Ticker("B"), Sentiment::Negative}};
    graphs.push_back(build_daily_graph(day, universe));
  }
  const auto dir = temp_dir("graphs");
  save_graphs(dir / "g.ndjson", graphs);
  const auto back = load_graphs(dir / "g.ndjson", universe);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back[static_cast<std::size_t>(i)].date == graphs[static_cast<std::size_t>(i)].date);
    CHECK(back[static_cast<std::size_t>(i)].edges == graphs[static_cast<std::size_t>(i)].edges);
    CHECK(back[static_cast<std::size_t>(i)].sentiments ==
          graphs[static_cast<std::size_t>(i)].sentiments);
  }
  CHECK(back[1].edge_count() == 0);

  // corrupt line -> RowError naming the line
  std::ofstream(dir / "bad.ndjson") << R"({"date": "2021-01-04"})" << "\n" << "oops\n";
  CHECK_THROWS_AS(load_graphs(dir / "bad.ndjson", universe), RowError);
  // edge endpoint outside the universe
  std::ofstream(dir / "alien.ndjson")
      << R"({"date": "2021-01-04", "affected": ["A", "Z"], "sentiments": {"A": "positive", "Z": "positive"}, "edges": [["A", "Z"]]})"
      << "\n";
  CHECK_THROWS_AS(load_graphs(dir / "alien.ndjson", universe), RowError);
}

TEST_CASE("mock provider is deterministic and extracts mentioned targets") {
  MockProvider mock(7);
  const auto req = build_prompt(Date::parse("2021-01-04"),
                                {"AAPL beats expectations", "IBM wins contract", "no tickers here"},
                                tickers({"AAPL", "IBM", "MSFT"}));
  const auto a = mock.complete(req.prompt_text);
  const auto b = mock.complete(req.prompt_text);
  CHECK(a == b);
  const auto entries = parse_affected(a, req.universe);
  std::set<Ticker> got;
  for (const auto& [t, s] : entries) got.insert(t);
  CHECK(got == std::set<Ticker>{Ticker("AAPL"), Ticker("IBM")});

  MockProvider other(8);
  CHECK(other.id() != mock.id());
}

TEST_CASE("response cache stores, validates, and survives reopen") {
  const auto dir = temp_dir("cache");
  const std::string prompt = "some prompt text";
  {
    ResponseCache cache(dir / "c");
    CHECK_FALSE(cache.lookup("prov", prompt).has_value());
    cache.store("prov", prompt, "the response");
    const auto hit = cache.lookup("prov", prompt);
    REQUIRE(hit.has_value());
    CHECK(*hit == "the response");
    CHECK_FALSE(cache.lookup("other-prov", prompt).has_value());  // id in the key
  }
  ResponseCache reopened(dir / "c");
  CHECK(reopened.lookup("prov", prompt) == "the response");

  // corrupting the stored prompt hash turns the entry into a loud failure
  const auto key = ResponseCache::key_for("prov", prompt);
  std::ofstream(dir / "c" / (key + ".json"))
      << R"({"prompt_sha256": "0000", "raw_response": "x", "provider": "prov", "retrieved_at": "t"})";
  CHECK_THROWS_AS(reopened.lookup("prov", prompt), DataError);
}

TEST_CASE("query_provider caches on miss and replays without a backend") {
  const auto dir = temp_dir("query");
  ResponseCache cache(dir / "c");
  const auto req =
      build_prompt(Date::parse("2021-01-04"), {"AAPL soars"}, tickers({"AAPL", "IBM"}));

  auto mock = make_provider(ProviderMode::Mock, 7);
  reset_provider_call_count();
  const auto first = query_provider(req, mock, cache);
  CHECK(provider_call_count() == 1);
  const auto second = query_provider(req, mock, cache);
  CHECK(provider_call_count() == 1);  // served from cache
  CHECK(first.entries == second.entries);
  CHECK(first.date == req.date);

  // replay with the same provider id reads the cache and never goes out
  auto replay = make_provider(ProviderMode::Replay, 7);
  CHECK(replay.impl == nullptr);
  const auto replayed = query_provider(req, replay, cache);
  CHECK(provider_call_count() == 1);
  CHECK(replayed.entries == first.entries);

  // replay of an unseen prompt names the miss
  const auto unseen =
      build_prompt(Date::parse("2021-01-05"), {"IBM sinks"}, tickers({"AAPL", "IBM"}));
  CHECK_THROWS_AS(query_provider(unseen, replay, cache), CacheMissError);
}

TEST_CASE("query_all preserves order under parallelism") {
  const auto dir = temp_dir("query_all");
  ResponseCache cache(dir / "c");
  auto mock = make_provider(ProviderMode::Mock, 7);
  std::vector<PromptRequest> reqs;
  const auto universe = tickers({"AAPL", "IBM", "MSFT"});
  for (int i = 0; i < 12; ++i) {
    const char* sym = i % 3 == 0 ? "AAPL" : i % 3 == 1 ? "IBM" : "MSFT";
    reqs.push_back(build_prompt(Date::parse("2021-01-04").plus_days(i),
                                {std::string(sym) + " story " + std::to_string(i)}, universe));
  }
  const auto results = query_all(reqs, mock, cache, 4);
  REQUIRE(results.size() == reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    CHECK(results[i].date == reqs[i].date);
    REQUIRE(results[i].entries.size() == 1);
    CHECK(results[i].entries[0].first == reqs[i].universe[i % 3]);
  }
}

TEST_CASE("provider mode strings") {
  CHECK(provider_mode_from_string("mock") == ProviderMode::Mock);
  CHECK(provider_mode_from_string("replay") == ProviderMode::Replay);
  CHECK(provider_mode_from_string("live") == ProviderMode::Live);
  CHECK_THROWS_AS(provider_mode_from_string("cloud"), ConfigError);
  CHECK(to_string(ProviderMode::Replay) == "replay");
}

TEST_CASE("live config requires its environment variables") {
  // the sandbox has no live credentials; from_env must fail loudly, not fall
  // back to a config-file secret
  if (!std::getenv("NEWSGRAPH_LLM_BASE_URL"))
    CHECK_THROWS_AS(LiveConfig::from_env(), ConfigError);
}
