#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "newsgraph/types.hpp"

namespace newsgraph::ingest {

inline constexpr std::string_view kMarketCsvHeader =
    "ticker,date,open,close,high,low,ask,bid,volume,dividend";

// Parses one Bar per data row. A wrong header or column count raises
// SchemaError; a row that fails numeric parsing or a Bar invariant raises
// RowError carrying the 1-based line number.
std::vector<Bar> parse_market_csv(std::istream& in, std::string_view source_name = "<stream>");
std::vector<Bar> parse_market_csv(const std::filesystem::path& path);

void write_market_csv(std::ostream& out, const std::vector<Bar>& bars);
void write_market_csv(const std::filesystem::path& path, const std::vector<Bar>& bars);

}  // namespace newsgraph::ingest
