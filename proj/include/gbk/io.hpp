#pragma once

// File formats: JSON frames {"n", "m", "frame"}, JSON region specs and
// tabulated graphs in CSV. Errors carry line numbers.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gbk/error.hpp"
#include "gbk/grassmann.hpp"
#include "gbk/region.hpp"

namespace gbk::io {

using Json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line on which the row-th array inside the value of "key" starts, or 0.
inline int line_of_row(std::string_view text, std::string_view key, std::size_t row, std::size_t from = 0) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto at = text.find(quoted, from);
  if (at == std::string_view::npos) return 0;
  const auto open = text.find('[', at);
  if (open == std::string_view::npos) return 0;
  int depth = 0;
  std::size_t seen = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (text[i] == '[') {
      ++depth;
      if (depth == 2) {
        if (seen == row) return line_of_offset(text, i);
        ++seen;
      }
    } else if (text[i] == ']') {
      if (--depth == 0) break;
    }
  }
  return line_of_offset(text, at);
}

inline int line_of_key(std::string_view text, std::string_view key, std::size_t from = 0) {
  const auto at = text.find("\"" + std::string(key) + "\"", from);
  return at == std::string_view::npos ? 0 : line_of_offset(text, at);
}

[[noreturn]] inline void fail_at(const std::string& source, int line, const std::string& what) {
  std::string where = source;
  if (line > 0) where += ":" + std::to_string(line);
  throw InvalidInput(where + ": " + what);
}

inline Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail_at(source, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), std::string("JSON syntax error: ") + e.what());
  }
}

inline double number_field(const Json& obj, std::string_view text, const std::string& source, const char* key) {
  if (!obj.contains(key)) fail_at(source, 0, std::string("missing field '") + key + "'");
  const Json& v = obj.at(key);
  if (!v.is_number()) fail_at(source, line_of_key(text, key), std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline int int_field(const Json& obj, std::string_view text, const std::string& source, const char* key,
                     std::size_t from = 0) {
  if (!obj.contains(key)) fail_at(source, 0, std::string("missing field '") + key + "'");
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail_at(source, line_of_key(text, key, from), std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

// Accepts either n rows of length n+m (the basis vectors) or n+m rows of length n
// (the d x n frame matrix); returns the d x n matrix. Line lookups start at `from`.
inline Matrix frame_matrix(const Json& obj, std::string_view text, const std::string& source, std::size_t from = 0) {
  if (!obj.is_object()) fail_at(source, line_of_offset(text, from), "expected a JSON object");
  const int n = int_field(obj, text, source, "n", from);
  const int m = int_field(obj, text, source, "m", from);
  if (n < 1 || m < 1) fail_at(source, line_of_key(text, "n", from), "n and m must be positive");
  if (!obj.contains("frame")) fail_at(source, line_of_offset(text, from), "missing field 'frame'");
  const Json& rows = obj.at("frame");
  const int frame_line = line_of_key(text, "frame", from);
  if (!rows.is_array() || rows.empty()) fail_at(source, frame_line, "'frame' must be a non-empty array of rows");
  const int d = n + m;
  const auto count = static_cast<int>(rows.size());
  int width = 0;
  if (count == n) width = d;
  else if (count == d) width = n;
  else
    fail_at(source, frame_line,
            "'frame' has " + std::to_string(count) + " rows, expected " + std::to_string(n) + " or " + std::to_string(d));
  Matrix out(d, n);
  for (int r = 0; r < count; ++r) {
    const Json& row = rows[r];
    const int line = line_of_row(text, "frame", r, from);
    if (!row.is_array() || static_cast<int>(row.size()) != width)
      fail_at(source, line, "row " + std::to_string(r + 1) + " must have " + std::to_string(width) + " entries");
    for (int c = 0; c < width; ++c) {
      if (!row[c].is_number()) fail_at(source, line, "row " + std::to_string(r + 1) + " has a non-numeric entry");
      const double v = row[c].get<double>();
      if (count == n) out(c, r) = v;
      else out(r, c) = v;
    }
  }
  return out;
}

}  // namespace detail

inline GrassmannPoint parse_frame(std::string_view text, const std::string& source = "<frame>") {
  const Json obj = detail::parse_json(text, source);
  const Matrix frame = detail::frame_matrix(obj, text, source);
  try {
    return GrassmannPoint::from_basis(frame);
  } catch (const InvalidInput& e) {
    detail::fail_at(source, detail::line_of_key(text, "frame"), e.what());
  } catch (const DegenerateInput& e) {
    detail::fail_at(source, detail::line_of_key(text, "frame"), e.what());
  }
}

inline GrassmannPoint load_frame(const std::string& path) { return parse_frame(read_file(path), path); }

// Row-major d x n frame matrix.
inline Json frame_to_json(const GrassmannPoint& p) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < p.frame().rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < p.frame().cols(); ++c) row.push_back(p.frame()(r, c));
    rows.push_back(row);
  }
  return Json{{"n", p.n()}, {"m", p.m()}, {"frame", rows}};
}

inline Json frame_to_json(const Matrix& frame) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < frame.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < frame.cols(); ++c) row.push_back(frame(r, c));
    rows.push_back(row);
  }
  return Json{{"n", frame.cols()}, {"m", frame.rows() - frame.cols()}, {"frame", rows}};
}

// {"P": frame, "Q": frame, "c": .., "delta": .., "theta": [lo, hi]}; theta is optional.
inline RegionSpec parse_region_spec(std::string_view text, const std::string& source = "<region>") {
  const Json obj = detail::parse_json(text, source);
  if (!obj.is_object()) detail::fail_at(source, 1, "expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (key != "P" && key != "Q" && key != "c" && key != "delta" && key != "theta")
      detail::fail_at(source, detail::line_of_key(text, key), "unknown key '" + key + "'");
  }
  for (const char* key : {"P", "Q"})
    if (!obj.contains(key)) detail::fail_at(source, 0, std::string("missing field '") + key + "'");
  const auto start_of = [&](const char* key) {
    const auto at = text.find("\"" + std::string(key) + "\"");
    return at == std::string_view::npos ? std::size_t{0} : at;
  };
  const Matrix p = detail::frame_matrix(obj.at("P"), text, source, start_of("P"));
  const Matrix q = detail::frame_matrix(obj.at("Q"), text, source, start_of("Q"));
  const double c = detail::number_field(obj, text, source, "c");
  const double delta = detail::number_field(obj, text, source, "delta");
  double lo = -std::numbers::pi / 2.0;
  double hi = std::numbers::pi / 2.0;
  if (obj.contains("theta")) {
    const Json& th = obj.at("theta");
    if (!th.is_array() || th.size() != 2 || !th[0].is_number() || !th[1].is_number())
      detail::fail_at(source, detail::line_of_key(text, "theta"), "'theta' must be [lo, hi]");
    lo = th[0].get<double>();
    hi = th[1].get<double>();
  }
  return RegionSpec::make(GrassmannPoint::from_basis(p), GrassmannPoint::from_basis(q), c, delta, lo, hi);
}

inline RegionSpec load_region_spec(const std::string& path) { return parse_region_spec(read_file(path), path); }

// A graph sampled on a tensor grid. Jacobians are central differences at
// interior nodes.
struct TabulatedGraph {
  int n = 0;
  int m = 0;
  std::vector<std::vector<double>> axes;
  std::vector<Vector> interior_points;
  std::vector<Matrix> interior_jacobians;  // n x m
};

// Header "x1,..,xn,f1,..,fm" followed by one row per grid node, any order.
inline TabulatedGraph parse_tabulated_csv(std::string_view text, const std::string& source = "<csv>") {
  auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      std::string_view cell = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
      cells.push_back(cell);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };

  std::vector<std::pair<int, std::string_view>> lines;
  {
    std::size_t start = 0;
    int number = 1;
    while (start <= text.size()) {
      const auto nl = text.find('\n', start);
      std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") != std::string_view::npos && line.front() != '#') lines.emplace_back(number, line);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
      ++number;
    }
  }
  if (lines.empty()) detail::fail_at(source, 0, "empty file");

  TabulatedGraph out;
  const auto header = split(lines.front().second);
  const int header_line = lines.front().first;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string expect_x = "x" + std::to_string(c + 1);
    if (out.m == 0 && header[c] == expect_x) {
      ++out.n;
      continue;
    }
    const std::string expect_f = "f" + std::to_string(out.m + 1);
    if (out.n > 0 && header[c] == expect_f) {
      ++out.m;
      continue;
    }
    detail::fail_at(source, header_line, "bad header column '" + std::string(header[c]) + "'");
  }
  if (out.n < 1 || out.m < 1) detail::fail_at(source, header_line, "header must list x1..xn then f1..fm");
  const int width = out.n + out.m;

  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = split(lines[l].second);
    if (static_cast<int>(cells.size()) != width)
      detail::fail_at(source, lines[l].first,
                      "expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    std::vector<double> row(width);
    for (int c = 0; c < width; ++c) {
      const auto cell = cells[c];
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), row[c]);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(row[c]))
        detail::fail_at(source, lines[l].first, "column " + std::to_string(c + 1) + " is not a finite number");
    }
    rows.push_back(std::move(row));
    row_lines.push_back(lines[l].first);
  }

  out.axes.resize(out.n);
  for (int i = 0; i < out.n; ++i) {
    for (const auto& row : rows) out.axes[i].push_back(row[i]);
    std::sort(out.axes[i].begin(), out.axes[i].end());
    out.axes[i].erase(std::unique(out.axes[i].begin(), out.axes[i].end()), out.axes[i].end());
    if (out.axes[i].size() < 3) detail::fail_at(source, 0, "axis x" + std::to_string(i + 1) + " needs at least 3 grid values");
  }
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::size_t> key(out.n);
    for (int i = 0; i < out.n; ++i)
      key[i] = static_cast<std::size_t>(
          std::lower_bound(out.axes[i].begin(), out.axes[i].end(), rows[r][i]) - out.axes[i].begin());
    if (!index.emplace(key, r).second) detail::fail_at(source, row_lines[r], "duplicate grid node");
  }

  std::size_t nodes = 1;
  for (const auto& axis : out.axes) nodes *= axis.size();
  if (nodes != rows.size())
    detail::fail_at(source, 0,
                    "rows do not form a tensor grid: " + std::to_string(rows.size()) + " rows for " +
                        std::to_string(nodes) + " nodes");

  std::vector<std::size_t> key(out.n, 1);
  for (;;) {
    Vector x(out.n);
    Matrix jac(out.n, out.m);
    for (int i = 0; i < out.n; ++i) x(i) = out.axes[i][key[i]];
    for (int i = 0; i < out.n; ++i) {
      auto plus = key, minus = key;
      ++plus[i];
      --minus[i];
      const auto& fp = rows[index.at(plus)];
      const auto& fm = rows[index.at(minus)];
      const double span = out.axes[i][plus[i]] - out.axes[i][minus[i]];
      for (int a = 0; a < out.m; ++a) jac(i, a) = (fp[out.n + a] - fm[out.n + a]) / span;
    }
    out.interior_points.push_back(x);
    out.interior_jacobians.push_back(jac);
    int axis = out.n - 1;
    while (axis >= 0 && ++key[axis] == out.axes[axis].size() - 1) {
      key[axis] = 1;
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

inline TabulatedGraph load_tabulated_csv(const std::string& path) { return parse_tabulated_csv(read_file(path), path); }

}  // namespace gbk::io
