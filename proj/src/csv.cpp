#include "streamkoop/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "streamkoop/errors.hpp"

namespace streamkoop {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_snapshots_csv(std::ostream& out, const SnapshotPairs& data) {
  const Index n = data.state_dim();
  for (Index i = 0; i < n; ++i) out << (i ? ",x" : "x") << i + 1;
  for (Index i = 0; i < n; ++i) out << ",y" << i + 1;
  out << '\n';
  for (Index m = 0; m < data.size(); ++m) {
    for (Index i = 0; i < n; ++i) out << (i ? "," : "") << format_double(data.past()(i, m));
    for (Index i = 0; i < n; ++i) out << ',' << format_double(data.future()(i, m));
    out << '\n';
  }
}

void save_snapshots_csv(const std::filesystem::path& path, const SnapshotPairs& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_snapshots_csv(out, data);
  if (!out) throw IoError("failed writing " + path.string());
}

SnapshotPairs read_snapshots_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (line_no == 0 || trim(line).empty()) throw ParseError("missing header", line_no + 1);

  const auto header = split(line);
  if (header.size() < 2 || header.size() % 2 != 0) {
    throw ParseError("header must have 2N columns x1..xN,y1..yN", line_no);
  }
  const std::size_t n = header.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    if (header[i] != "x" + std::to_string(i + 1) ||
        header[n + i] != "y" + std::to_string(i + 1)) {
      throw ParseError("header must read x1..xN,y1..yN", line_no);
    }
  }

  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 2 * n) {
      throw ParseError("expected " + std::to_string(2 * n) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    for (const auto cell : cells) {
      double v = 0.0;
      const auto* first = cell.data();
      const auto* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last) {
        throw ParseError("non-numeric cell '" + std::string(cell) + "'", line_no);
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("no samples", line_no + 1);

  const auto dim = static_cast<Index>(n);
  Matrix past(dim, rows);
  Matrix future(dim, rows);
  for (Index m = 0; m < rows; ++m) {
    for (Index i = 0; i < dim; ++i) {
      past(i, m) = values[static_cast<std::size_t>(m * 2 * dim + i)];
      future(i, m) = values[static_cast<std::size_t>(m * 2 * dim + dim + i)];
    }
  }
  try {
    return SnapshotPairs(std::move(past), std::move(future));
  } catch (const ContractError& e) {
    throw DataError(e.what());
  }
}

SnapshotPairs ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_snapshots_csv(in);
}

void write_prediction_csv(std::ostream& out, const Matrix& pred, const Matrix& truth,
                          Index first_step) {
  const bool with_truth = truth.size() > 0;
  if (with_truth && (truth.rows() != pred.rows() || truth.cols() != pred.cols())) {
    throw ContractError("prediction csv: truth and prediction shapes differ");
  }
  const Index n = pred.rows();
  out << "step";
  if (with_truth) {
    for (Index i = 0; i < n; ++i) out << ",true_" << i + 1;
  }
  for (Index i = 0; i < n; ++i) out << ",pred_" << i + 1;
  out << '\n';
  for (Index s = 0; s < pred.cols(); ++s) {
    out << first_step + s;
    if (with_truth) {
      for (Index i = 0; i < n; ++i) out << ',' << format_double(truth(i, s));
    }
    for (Index i = 0; i < n; ++i) out << ',' << format_double(pred(i, s));
    out << '\n';
  }
}

}  // namespace streamkoop
