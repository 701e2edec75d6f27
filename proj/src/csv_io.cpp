#include "cmlr/csv_io.hpp"

#include "cmlr/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cmlr {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

double parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw DataError(where(path, line) + "cannot parse '" + text + "' as a number");
  }
  if (!std::isfinite(value)) throw DataError(where(path, line) + "non-finite value '" + text + "'");
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

// Reads a header of the form <prefix>1,...,<prefix>d followed by `extra`
// optional trailing names; returns d and which extras are present.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
};

Table read_table(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (blank(line)) continue;
    if (t.header.empty()) {
      t.header = split(line);
      continue;
    }
    const std::vector<std::string> cells = split(line);
    if (cells.size() != t.header.size()) {
      throw DataError(where(path, line_no) + "expected " + std::to_string(t.header.size()) +
                      " fields, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, path, line_no));
    t.rows.push_back(std::move(row));
    t.line_numbers.push_back(line_no);
  }
  if (t.header.empty()) throw DataError(path.string() + ": missing header row");
  return t;
}

void expect_prefixed(const std::vector<std::string>& header, std::size_t count, const std::string& prefix,
                     const std::filesystem::path& path) {
  for (std::size_t c = 0; c < count; ++c) {
    if (header[c] != prefix + std::to_string(c + 1)) {
      throw DataError(where(path, 1) + "expected column '" + prefix + std::to_string(c + 1) + "', found '" +
                      header[c] + "'");
    }
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Dataset load_csv(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const bool labelled = !t.header.empty() && t.header.back() == "label";
  const std::size_t b_col = t.header.size() - (labelled ? 2 : 1);
  if (t.header.size() < (labelled ? 3u : 2u) || t.header[b_col] != "b") {
    throw DataError(where(path, 1) + "header must be a_1,...,a_d,b[,label]");
  }
  expect_prefixed(t.header, b_col, "a_", path);
  const Index d = static_cast<Index>(b_col);
  const Index m = static_cast<Index>(t.rows.size());
  Eigen::MatrixXd a(m, d);
  Eigen::VectorXd b(m);
  std::vector<int> labels;
  for (Index i = 0; i < m; ++i) {
    const auto& row = t.rows[i];
    const std::size_t line = t.line_numbers[i];
    bool zero = true;
    for (Index c = 0; c < d; ++c) {
      a(i, c) = row[c];
      zero = zero && row[c] == 0.0;
    }
    if (zero) throw DataError(where(path, line) + "feature vector is zero");
    b(i) = row[b_col];
    if (labelled) {
      const double l = row.back();
      if (l != std::floor(l) || l < 1.0 || l > 1e6) {
        throw DataError(where(path, line) + "label must be a positive integer");
      }
      labels.push_back(static_cast<int>(l) - 1);
    }
  }
  try {
    return Dataset(std::move(a), std::move(b), std::move(labels));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  for (Index c = 0; c < data.dim(); ++c) out << "a_" << (c + 1) << ',';
  out << 'b' << (data.has_labels() ? ",label" : "") << '\n';
  for (Index i = 0; i < data.size(); ++i) {
    for (Index c = 0; c < data.dim(); ++c) out << format_double(data.features()(i, c)) << ',';
    out << format_double(data.response(i));
    if (data.has_labels()) out << ',' << (data.labels()[i] + 1);
    out << '\n';
  }
}

Eigen::MatrixXd load_betas(const std::filesystem::path& path) {
  const Table t = read_table(path);
  expect_prefixed(t.header, t.header.size(), "beta_", path);
  Eigen::MatrixXd betas(static_cast<Index>(t.rows.size()), static_cast<Index>(t.header.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.header.size(); ++c) betas(static_cast<Index>(r), static_cast<Index>(c)) = t.rows[r][c];
  }
  if (betas.rows() == 0) throw DataError(path.string() + ": no coefficient vectors");
  return betas;
}

void write_betas(const std::filesystem::path& path, const Eigen::MatrixXd& betas) {
  std::ofstream out = open_out(path);
  for (Index c = 0; c < betas.cols(); ++c) out << (c ? "," : "") << "beta_" << (c + 1);
  out << '\n';
  for (Index r = 0; r < betas.rows(); ++r) {
    for (Index c = 0; c < betas.cols(); ++c) out << (c ? "," : "") << format_double(betas(r, c));
    out << '\n';
  }
}

void write_estimates(const std::filesystem::path& path, const EstimateField& z, std::span<const int> labels) {
  std::ofstream out = open_out(path);
  for (Index c = 0; c < z.dim(); ++c) out << (c ? "," : "") << "z_" << (c + 1);
  out << (labels.empty() ? "" : ",label") << '\n';
  for (Index i = 0; i < z.size(); ++i) {
    for (Index c = 0; c < z.dim(); ++c) out << (c ? "," : "") << format_double(z.values()(i, c));
    if (!labels.empty()) out << ',' << (labels[static_cast<std::size_t>(i)] + 1);
    out << '\n';
  }
}

void write_labels(const std::filesystem::path& path, std::span<const int> labels) {
  std::ofstream out = open_out(path);
  out << "label\n";
  for (int l : labels) out << (l + 1) << '\n';
}

Dataset preprocess_center_scale(const Dataset& data, double alpha, Index column) {
  if (column < 0 || column >= data.dim()) throw DataError("preprocessing column out of range");
  if (!std::isfinite(alpha)) throw DataError("scale must be finite");
  Eigen::MatrixXd a = data.features();
  const double mean = a.col(column).mean();
  a.col(column) = alpha * (a.col(column).array() - mean);
  return Dataset(std::move(a), data.responses(), data.labels());
}

}  // namespace cmlr
