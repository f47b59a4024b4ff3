#include "bpls/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace bpls {

RawDataset RawDataset::rows(const std::vector<int>& idx) const {
  RawDataset out;
  out.x_names = x_names;
  out.y_names = y_names;
  out.X.resize(idx.size(), X.cols());
  out.Y.resize(idx.size(), Y.cols());
  for (size_t i = 0; i < idx.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
    out.Y.row(static_cast<Eigen::Index>(i)) = Y.row(idx[i]);
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_missing(const std::string& cell) {
  if (cell.empty()) return true;
  std::string lower;
  lower.reserve(cell.size());
  for (char c : cell) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "na" || lower == "nan";
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

}  // namespace

RawDataset load_csv(const std::string& path, const CsvLayout& layout) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  if (layout.response_columns.empty())
    throw InvalidParameter("load_csv: layout must name at least one response column");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_line(line, layout.delimiter);

  std::vector<int> y_cols;
  for (const auto& name : layout.response_columns) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw MissingColumn(path + ": response column '" + name + "' not in header");
    y_cols.push_back(static_cast<int>(it - header.begin()));
  }
  std::vector<int> x_cols;
  for (int j = 0; j < static_cast<int>(header.size()); ++j)
    if (std::find(y_cols.begin(), y_cols.end(), j) == y_cols.end()) x_cols.push_back(j);
  if (x_cols.empty()) throw ParseError(path + ": no predictor columns remain");

  std::vector<std::vector<double>> x_rows, y_rows;
  std::vector<int> dropped;
  int data_row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line, layout.delimiter);
    if (cells.size() != header.size())
      throw ParseError(path + ": row " + std::to_string(data_row + 1) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(header.size()));
    bool missing = false;
    for (const auto& c : cells)
      if (is_missing(c)) {
        missing = true;
        break;
      }
    if (missing) {
      dropped.push_back(data_row);
      ++data_row;
      continue;
    }
    std::vector<double> vals(cells.size());
    for (size_t j = 0; j < cells.size(); ++j) {
      const std::string& c = cells[j];
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size())
        throw ParseError(path + ": non-numeric cell at row " + std::to_string(data_row + 1) +
                         ", column " + std::to_string(j + 1) + " ('" + c + "')");
      vals[j] = v;
    }
    std::vector<double> xr(x_cols.size()), yr(y_cols.size());
    for (size_t j = 0; j < x_cols.size(); ++j) xr[j] = vals[x_cols[j]];
    for (size_t j = 0; j < y_cols.size(); ++j) yr[j] = vals[y_cols[j]];
    x_rows.push_back(std::move(xr));
    y_rows.push_back(std::move(yr));
    ++data_row;
  }

  if (x_rows.size() < 2) throw ParseError(path + ": fewer than 2 complete rows");

  RawDataset d;
  d.dropped_rows = dropped;
  for (int j : x_cols) d.x_names.push_back(header[j]);
  for (int j : y_cols) d.y_names.push_back(header[j]);
  d.X.resize(x_rows.size(), x_cols.size());
  d.Y.resize(y_rows.size(), y_cols.size());
  for (size_t i = 0; i < x_rows.size(); ++i) {
    for (size_t j = 0; j < x_cols.size(); ++j) d.X(i, j) = x_rows[i][j];
    for (size_t j = 0; j < y_cols.size(); ++j) d.Y(i, j) = y_rows[i][j];
  }
  return d;
}

void write_csv(const std::string& path, const RawDataset& d, char delimiter) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.precision(17);
  for (size_t j = 0; j < d.x_names.size(); ++j) {
    if (j) out << delimiter;
    out << d.x_names[j];
  }
  for (const auto& name : d.y_names) out << delimiter << name;
  out << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    for (Eigen::Index j = 0; j < d.p(); ++j) {
      if (j) out << delimiter;
      out << d.X(i, j);
    }
    for (Eigen::Index j = 0; j < d.r(); ++j) out << delimiter << d.Y(i, j);
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<std::vector<int>> make_folds(int n, int k, RngStream& rng) {
  if (k < 2 || k > n) throw InvalidFolds("make_folds: need 2 <= k <= n");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  // Fisher-Yates on our own stream; std::shuffle is not seed-portable.
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::vector<int>> folds(k);
  const int base = n / k;
  const int extra = n % k;
  int pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    folds[f].assign(idx.begin() + pos, idx.begin() + pos + size);
    pos += size;
  }
  return folds;
}

std::vector<int> complement_indices(int n, const std::vector<int>& test) {
  std::vector<char> mark(n, 0);
  for (int i : test) mark[i] = 1;
  std::vector<int> out;
  out.reserve(n - test.size());
  for (int i = 0; i < n; ++i)
    if (!mark[i]) out.push_back(i);
  return out;
}

}  // namespace bpls
