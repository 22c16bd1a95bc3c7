#include "fxclust/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fxclust/error.hpp"

namespace fxclust {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == delim) cells.push_back("");
  return cells;
}

double parse_price(const std::string& cell, const std::string& origin,
                   std::size_t line_no) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::MalformedRow, origin + " line " +
                                             std::to_string(line_no) +
                                             ": unparsable price '" + cell + "'");
  }
  if (!(value > 0.0)) {
    throw Error(ErrorCode::NonPositivePrice,
                origin + " line " + std::to_string(line_no) + ": price " + cell);
  }
  return value;
}

struct ParsedHeader {
  std::size_t date_col;
  std::vector<std::size_t> price_cols;
  std::vector<std::string> price_names;
  bool long_format;
};

ParsedHeader read_header(const std::vector<std::string>& cells,
                         const CsvFormat& format, const std::string& origin) {
  if (cells.size() < 2) {
    throw Error(ErrorCode::MalformedRow,
                origin + " line 1: header needs a date column and at least one "
                         "price column");
  }
  ParsedHeader h{};
  // Long layout: exactly date,asset,price.
  if (cells.size() == 3 && lower(cells[0]) == "date" &&
      lower(cells[1]) == "asset" && lower(cells[2]) == "price") {
    h.long_format = true;
    h.date_col = 0;
    return h;
  }
  h.long_format = false;
  h.date_col = 0;
  if (!format.date_column.empty()) {
    auto it = std::find(cells.begin(), cells.end(), format.date_column);
    if (it == cells.end()) {
      throw Error(ErrorCode::ConfigError, origin + ": no column named '" +
                                              format.date_column + "'");
    }
    h.date_col = std::size_t(it - cells.begin());
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c == h.date_col) continue;
    if (!format.price_columns.empty() &&
        std::find(format.price_columns.begin(), format.price_columns.end(),
                  cells[c]) == format.price_columns.end()) {
      continue;
    }
    h.price_cols.push_back(c);
    h.price_names.push_back(cells[c]);
  }
  if (h.price_cols.empty()) {
    throw Error(ErrorCode::ConfigError,
                origin + ": no price columns selected from header");
  }
  return h;
}

void append_observation(RateSeries& s, Date date, double price,
                        const std::string& origin, std::size_t line_no) {
  if (!s.dates.empty() && date == s.dates.back()) {
    throw Error(ErrorCode::DuplicateDate,
                origin + " line " + std::to_string(line_no) + ": date " +
                    date.to_string() + " repeats in series " + s.meta.code);
  }
  s.dates.push_back(date);
  s.prices.push_back(price);
}

// Rows may arrive in any date order; sort each series afterwards and then
// detect duplicates that were not adjacent.
void finalize_series(RateSeries& s, const std::string& origin) {
  std::vector<std::size_t> order(s.dates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.dates[a] < s.dates[b];
  });
  std::vector<Date> dates(order.size());
  std::vector<double> prices(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    dates[i] = s.dates[order[i]];
    prices[i] = s.prices[order[i]];
  }
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (dates[i] == dates[i - 1]) {
      throw Error(ErrorCode::DuplicateDate, origin + ": date " +
                                                dates[i].to_string() +
                                                " repeats in series " +
                                                s.meta.code);
    }
  }
  s.dates = std::move(dates);
  s.prices = std::move(prices);
}

}  // namespace

std::vector<RateSeries> parse_rates(const std::string& path,
                                    const CsvFormat& format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse_rates(in, format, path);
}

std::vector<RateSeries> parse_rates(std::istream& in, const CsvFormat& format,
                                    const std::string& origin) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedRow, origin + ": empty file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header_cells = split_row(line, format.delimiter);
  ParsedHeader header = read_header(header_cells, format, origin);
  const std::size_t header_width = header_cells.size();

  std::vector<RateSeries> series;
  std::map<std::string, std::size_t> index_of;  // long format only
  if (!header.long_format) {
    series.resize(header.price_cols.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
      series[i].meta.code = header.price_names[i];
      series[i].meta.name = header.price_names[i];
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_row(line, format.delimiter);

    if (header.long_format) {
      if (cells.size() != 3) {
        throw Error(ErrorCode::MalformedRow,
                    origin + " line " + std::to_string(line_no) +
                        ": expected 3 cells, got " + std::to_string(cells.size()));
      }
      Date date;
      try {
        date = Date::parse(cells[0]);
      } catch (const Error& e) {
        throw Error(ErrorCode::MalformedRow,
                    origin + " line " + std::to_string(line_no) + ": " + e.what());
      }
      const std::string& code = cells[1];
      if (code.empty()) {
        throw Error(ErrorCode::MalformedRow, origin + " line " +
                                                 std::to_string(line_no) +
                                                 ": empty asset code");
      }
      auto [it, inserted] = index_of.try_emplace(code, series.size());
      if (inserted) {
        series.emplace_back();
        series.back().meta.code = code;
        series.back().meta.name = code;
      }
      double price = parse_price(cells[2], origin, line_no);
      append_observation(series[it->second], date, price, origin, line_no);
    } else {
      if (cells.size() != header_width) {
        throw Error(ErrorCode::MalformedRow,
                    origin + " line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header_width) + " cells, got " +
                        std::to_string(cells.size()));
      }
      Date date;
      try {
        date = Date::parse(cells[header.date_col]);
      } catch (const Error& e) {
        throw Error(ErrorCode::MalformedRow,
                    origin + " line " + std::to_string(line_no) + ": " + e.what());
      }
      for (std::size_t i = 0; i < header.price_cols.size(); ++i) {
        std::size_t c = header.price_cols[i];
        if (cells[c].empty()) continue;  // holiday gap
        double price = parse_price(cells[c], origin, line_no);
        append_observation(series[i], date, price, origin, line_no);
      }
    }
  }

  for (RateSeries& s : series) finalize_series(s, origin);
  // Long rows carry no column order, so sort those series by code to make the
  // result independent of row order. Wide series keep their column order.
  if (header.long_format) {
    std::sort(series.begin(), series.end(),
              [](const RateSeries& a, const RateSeries& b) {
                return a.meta.code < b.meta.code;
              });
  }
  return series;
}

std::map<std::string, AssetMeta> parse_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse_metadata(in, path);
}

std::map<std::string, AssetMeta> parse_metadata(std::istream& in,
                                                const std::string& origin) {
  std::map<std::string, AssetMeta> out;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedRow, origin + ": empty metadata file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_row(line, ',');
  const std::vector<std::string> expected = {"code",   "name",
                                             "regime", "market_class",
                                             "region", "gdp_per_capita"};
  for (std::string& h : header) h = lower(h);
  if (header != expected) {
    throw Error(ErrorCode::MalformedRow,
                origin + ": metadata header must be "
                         "code,name,regime,market_class,region,gdp_per_capita");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_row(line, ',');
    if (cells.size() != 6) {
      throw Error(ErrorCode::MalformedRow, origin + " line " +
                                               std::to_string(line_no) +
                                               ": expected 6 cells");
    }
    AssetMeta m;
    m.code = cells[0];
    if (m.code.empty()) {
      throw Error(ErrorCode::MalformedRow, origin + " line " +
                                               std::to_string(line_no) +
                                               ": empty code");
    }
    m.name = cells[1];
    m.regime = regime_from_string(cells[2]);
    m.market_class = market_class_from_string(cells[3]);
    m.region = cells[4];
    if (!cells[5].empty()) {
      double g = 0.0;
      auto [ptr, ec] =
          std::from_chars(cells[5].data(), cells[5].data() + cells[5].size(), g);
      if (ec != std::errc() || ptr != cells[5].data() + cells[5].size() ||
          !(g > 0.0)) {
        throw Error(ErrorCode::MalformedRow,
                    origin + " line " + std::to_string(line_no) +
                        ": gdp_per_capita must be a positive number");
      }
      m.gdp_per_capita = g;
    }
    if (!out.emplace(m.code, std::move(m)).second) {
      throw Error(ErrorCode::MalformedRow, origin + " line " +
                                               std::to_string(line_no) +
                                               ": duplicate code " + cells[0]);
    }
  }
  return out;
}

void apply_metadata(std::vector<RateSeries>& series,
                    const std::map<std::string, AssetMeta>& meta) {
  for (RateSeries& s : series) {
    auto it = meta.find(s.meta.code);
    if (it != meta.end()) s.meta = it->second;
  }
}

Dataset align(const std::vector<RateSeries>& series, AlignPolicy policy) {
  if (series.size() < 2) {
    throw Error(ErrorCode::TooFewDates, "alignment needs at least 2 series");
  }
  // A series only needs one observation to participate; the >= 3 floor is
  // enforced on the aligned axis, where it actually matters.
  for (const RateSeries& s : series) {
    if (s.size() < 1) {
      throw Error(ErrorCode::TooFewDates,
                  "series " + s.meta.code + " has no observations");
    }
  }

  std::vector<Date> axis;
  if (policy == AlignPolicy::intersect) {
    std::set<Date> common(series[0].dates.begin(), series[0].dates.end());
    for (std::size_t i = 1; i < series.size(); ++i) {
      std::set<Date> next;
      for (Date d : series[i].dates) {
        if (common.count(d)) next.insert(d);
      }
      common.swap(next);
    }
    axis.assign(common.begin(), common.end());
    if (axis.size() < 3) {
      throw Error(ErrorCode::EmptyIntersection,
                  "common date axis has " + std::to_string(axis.size()) +
                      " dates, need >= 3");
    }
  } else {
    std::set<Date> all;
    Date latest_start = series[0].dates.front();
    for (const RateSeries& s : series) {
      all.insert(s.dates.begin(), s.dates.end());
      latest_start = std::max(latest_start, s.dates.front());
    }
    // Leading gaps cannot be filled, so the axis starts where the youngest
    // series starts.
    for (Date d : all) {
      if (d >= latest_start) axis.push_back(d);
    }
    if (axis.size() < 3) {
      throw Error(ErrorCode::TooFewDates,
                  "forward-fill axis has " + std::to_string(axis.size()) +
                      " dates, need >= 3");
    }
  }

  Dataset ds;
  ds.date_axis = axis;
  ds.assets.reserve(series.size());
  for (const RateSeries& s : series) {
    RateSeries aligned;
    aligned.meta = s.meta;
    aligned.dates = axis;
    aligned.prices.reserve(axis.size());
    std::size_t k = 0;
    double last = 0.0;
    for (Date d : axis) {
      while (k < s.dates.size() && s.dates[k] < d) {
        last = s.prices[k];
        ++k;
      }
      if (k < s.dates.size() && s.dates[k] == d) {
        last = s.prices[k];
        ++k;
        aligned.prices.push_back(last);
      } else if (policy == AlignPolicy::forward_fill) {
        aligned.prices.push_back(last);
      } else {
        // intersect axis only contains dates present in every series
        throw Error(ErrorCode::EmptyIntersection,
                    "internal: date " + d.to_string() + " missing from " +
                        s.meta.code);
      }
    }
    ds.assets.push_back(std::move(aligned));
  }
  return ds;
}

Dataset redenominate(const Dataset& ds, const RateSeries& bridge,
                     const std::string& new_numeraire) {
  if (ds.orientation == Orientation::unknown) {
    throw Error(ErrorCode::OrientationUnknown,
                "dataset orientation flag must be set before redenomination");
  }
  std::set<Date> bridge_dates(bridge.dates.begin(), bridge.dates.end());
  std::vector<Date> axis;
  for (Date d : ds.date_axis) {
    if (bridge_dates.count(d)) axis.push_back(d);
  }
  if (axis.size() < 3) {
    throw Error(ErrorCode::EmptyIntersection,
                "bridge shares only " + std::to_string(axis.size()) +
                    " dates with the dataset, need >= 3");
  }

  // bridge price on each kept axis date
  std::vector<double> factor(axis.size());
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
      while (bridge.dates[k] < axis[i]) ++k;
      factor[i] = bridge.prices[k];
    }
  }

  std::vector<std::size_t> keep;
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < ds.date_axis.size(); ++i) {
      if (k < axis.size() && ds.date_axis[i] == axis[k]) {
        keep.push_back(i);
        ++k;
      }
    }
  }

  Dataset out;
  out.numeraire = new_numeraire;
  out.date_axis = axis;
  out.orientation = ds.orientation;
  out.assets.reserve(ds.assets.size());
  const bool multiply = ds.orientation == Orientation::numeraire_per_asset;
  for (const RateSeries& s : ds.assets) {
    RateSeries r;
    r.meta = s.meta;
    r.dates = axis;
    r.prices.resize(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) {
      double p = s.prices[keep[i]];
      r.prices[i] = multiply ? p * factor[i] : p / factor[i];
    }
    out.assets.push_back(std::move(r));
  }
  return out;
}

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  out << "date";
  for (const RateSeries& s : ds.assets) out << ',' << s.meta.code;
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < ds.date_axis.size(); ++i) {
    out << ds.date_axis[i].to_string();
    for (const RateSeries& s : ds.assets) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.prices[i]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_dataset_csv(ds, out);
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::floating: return "floating";
    case Regime::fixed_peg: return "fixed_peg";
    case Regime::crawling_peg: return "crawling_peg";
    case Regime::horizontal_band: return "horizontal_band";
  }
  return "floating";
}

const char* to_string(MarketClass m) {
  switch (m) {
    case MarketClass::developed: return "developed";
    case MarketClass::emerging: return "emerging";
    case MarketClass::frontier: return "frontier";
    case MarketClass::unclassified: return "unclassified";
  }
  return "unclassified";
}

Regime regime_from_string(const std::string& s) {
  if (s == "floating" || s.empty()) return Regime::floating;
  if (s == "fixed_peg") return Regime::fixed_peg;
  if (s == "crawling_peg") return Regime::crawling_peg;
  if (s == "horizontal_band") return Regime::horizontal_band;
  throw Error(ErrorCode::MalformedRow, "unknown regime '" + s + "'");
}

MarketClass market_class_from_string(const std::string& s) {
  if (s == "developed") return MarketClass::developed;
  if (s == "emerging") return MarketClass::emerging;
  if (s == "frontier") return MarketClass::frontier;
  if (s == "unclassified" || s.empty()) return MarketClass::unclassified;
  throw Error(ErrorCode::MalformedRow, "unknown market class '" + s + "'");
}

}  // namespace fxclust
