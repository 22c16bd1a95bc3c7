#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fxclust/date.hpp"

namespace fxclust {

enum class Regime { floating, fixed_peg, crawling_peg, horizontal_band };
enum class MarketClass { developed, emerging, frontier, unclassified };

// Whether a price quotes units of numeraire per one unit of the asset,
// or units of the asset per one unit of numeraire. Redenomination needs to
// know; everything else is agnostic.
enum class Orientation { unknown, numeraire_per_asset, asset_per_numeraire };

struct AssetMeta {
  std::string code;
  std::string name;
  Regime regime = Regime::floating;
  MarketClass market_class = MarketClass::unclassified;
  std::string region;
  std::optional<double> gdp_per_capita;  // USD/person/year, label-size hint only
};

// Dated price series for one asset. Dates strictly increasing, prices > 0,
// one price per date.
struct RateSeries {
  AssetMeta meta;
  std::vector<Date> dates;
  std::vector<double> prices;

  std::size_t size() const { return dates.size(); }
};

// A panel of RateSeries sharing one common date axis.
struct Dataset {
  std::vector<RateSeries> assets;
  std::string numeraire;
  std::vector<Date> date_axis;
  Orientation orientation = Orientation::unknown;

  std::size_t n_assets() const { return assets.size(); }
  std::size_t n_dates() const { return date_axis.size(); }
};

const char* to_string(Regime r);
const char* to_string(MarketClass m);
Regime regime_from_string(const std::string& s);
MarketClass market_class_from_string(const std::string& s);

}  // namespace fxclust
