#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fxclust/types.hpp"

namespace fxclust {

enum class AlignPolicy { intersect, forward_fill };

// Column mapping for delimited input. Two layouts are accepted:
//   wide: one date column, one column per asset (the default reading).
//   long: exactly the columns date,asset,price (any casing), auto-detected
//         from the header.
// date_column empty means "first header column". Empty cells in a wide file
// mean the asset has no observation on that date, not an error.
struct CsvFormat {
  char delimiter = ',';
  std::string date_column;
  std::vector<std::string> price_columns;  // empty = every non-date column
};

std::vector<RateSeries> parse_rates(const std::string& path,
                                    const CsvFormat& format = {});
std::vector<RateSeries> parse_rates(std::istream& in, const CsvFormat& format,
                                    const std::string& origin);

// Sidecar metadata CSV with header code,name,regime,market_class,region,
// gdp_per_capita. Unknown codes in the panel keep default metadata.
std::map<std::string, AssetMeta> parse_metadata(const std::string& path);
std::map<std::string, AssetMeta> parse_metadata(std::istream& in,
                                                const std::string& origin);

void apply_metadata(std::vector<RateSeries>& series,
                    const std::map<std::string, AssetMeta>& meta);

// Puts all series on one date axis.
//   intersect:    axis = common dates of every series (>= 3 required).
//   forward_fill: axis = union of dates, truncated at the front so every
//                 series has already started; interior gaps carry the last
//                 observed price forward.
Dataset align(const std::vector<RateSeries>& series, AlignPolicy policy);

// Re-expresses all prices in a new numeraire via a bridge series quoting
// new-numeraire per old-numeraire. The axis shrinks to the dates shared with
// the bridge; the dataset orientation decides multiply vs divide.
Dataset redenominate(const Dataset& ds, const RateSeries& bridge,
                     const std::string& new_numeraire);

// Canonical wide CSV (date column + one column per asset, prices with 17
// significant digits). write/parse round-trips exactly.
void write_dataset_csv(const Dataset& ds, std::ostream& out);
void write_dataset_csv(const Dataset& ds, const std::string& path);

}  // namespace fxclust
