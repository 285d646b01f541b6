#include "ltfu/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ltfu {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::runtime_error("csv: cannot parse '" + cell + "' at row " +
                             std::to_string(row) + ", column " + std::to_string(col));
  return v;
}

}  // namespace

std::pair<Dataset, MaskMatrix> load_csv(const std::string& path, const Schema& schema,
                                        const std::string& missing_token) {
  validate_schema(schema);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  if (header.size() != schema.size())
    throw std::runtime_error("csv: header has " + std::to_string(header.size()) +
                             " columns, schema expects " + std::to_string(schema.size()));
  for (std::size_t c = 0; c < schema.size(); ++c)
    if (header[c] != schema[c].name)
      throw std::runtime_error("csv: header column " + std::to_string(c) + " is '" +
                               header[c] + "', schema expects '" + schema[c].name + "'");

  std::vector<double> values;
  std::vector<std::uint8_t> bits;
  std::size_t n_rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != schema.size())
      throw std::runtime_error("csv: row " + std::to_string(n_rows) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(schema.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == missing_token) {
        values.push_back(0.0);
        bits.push_back(1);
      } else {
        values.push_back(parse_cell(cells[c], n_rows, c));
        bits.push_back(0);
      }
    }
    ++n_rows;
  }

  Dataset ds(schema, n_rows);
  ds.values = std::move(values);
  MaskMatrix mask(n_rows, schema.size());
  mask.bits = std::move(bits);
  validate_dataset(ds, &mask);
  return {std::move(ds), std::move(mask)};
}

void write_csv(const Dataset& ds, const MaskMatrix& mask, const std::string& path,
               const std::string& missing_token) {
  require_aligned(ds, mask);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");

  for (std::size_t c = 0; c < ds.n_cols; ++c) {
    if (c) out << ',';
    out << ds.schema[c].name;
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    for (std::size_t c = 0; c < ds.n_cols; ++c) {
      if (c) out << ',';
      if (mask.at(r, c))
        out << missing_token;
      else
        out << format_double(ds.at(r, c));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

}  // namespace ltfu
