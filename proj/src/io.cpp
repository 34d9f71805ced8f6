#include "gammareg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gammareg/errors.hpp"

namespace gammareg {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// RFC-4180 field quoting: needed only when the field contains a comma,
/// quote, or line break (never true for our numeric output, but kept for
/// correctness of the general writer).
std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

/// Splits one RFC-4180 record into fields (handles quoted fields with
/// embedded commas and doubled quotes).
std::vector<std::string> split_record(const std::string& line,
                                      const std::string& path) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty()) {
        throw IoError(path + ": quote inside unquoted field");
      }
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (in_quotes) throw IoError(path + ": unterminated quoted field");
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& field, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw IoError(path + ": not a number: '" + field + "'");
  }
}

}  // namespace

std::string dataset_to_csv(const RegressionDataset& data,
                           const std::vector<int>& is_outlier) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (!is_outlier.empty() &&
      static_cast<Eigen::Index>(is_outlier.size()) != n) {
    throw LengthMismatch("outlier flags do not match the row count");
  }
  std::string out;
  for (Eigen::Index j = 0; j < p; ++j) {
    out += "x" + std::to_string(j + 1) + ",";
  }
  out += "y,is_outlier\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      out += quote_if_needed(format_double(data.x(i, j)));
      out += ',';
    }
    out += quote_if_needed(format_double(data.y(i)));
    out += ',';
    out += is_outlier.empty()
               ? "0"
               : std::to_string(is_outlier[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  return out;
}

void write_dataset_csv(const std::string& path, const RegressionDataset& data,
                       const std::vector<int>& is_outlier) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  const std::string body = dataset_to_csv(data, is_outlier);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw IoError("write failed: " + path);
}

GeneratedData parse_dataset_csv(const std::string& text,
                                const std::string& path) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_record(line, path);
  if (header.size() < 2 || header[header.size() - 2] != "y" ||
      header.back() != "is_outlier") {
    throw IoError(path + ": expected header x1..xp,y,is_outlier");
  }
  const std::size_t p = header.size() - 2;
  for (std::size_t j = 0; j < p; ++j) {
    if (header[j] != "x" + std::to_string(j + 1)) {
      throw IoError(path + ": unexpected covariate column '" + header[j] +
                    "'");
    }
  }
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  std::vector<int> flags;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_record(line, path);
    if (fields.size() != header.size()) {
      throw IoError(path + ": row " + std::to_string(xs.size() + 1) +
                    " has " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(header.size()));
    }
    std::vector<double> row(p);
    for (std::size_t j = 0; j < p; ++j) row[j] = parse_double(fields[j], path);
    xs.push_back(std::move(row));
    ys.push_back(parse_double(fields[p], path));
    const double flag = parse_double(fields[p + 1], path);
    flags.push_back(flag != 0.0 ? 1 : 0);
  }
  if (xs.empty()) throw IoError(path + ": no data rows");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(xs.size()),
                    static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          xs[i][j];
    }
    y(static_cast<Eigen::Index>(i)) = ys[i];
  }
  return {RegressionDataset{std::move(x), std::move(y)}, std::move(flags)};
}

GeneratedData read_dataset_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_dataset_csv(buf.str(), path);
}

}  // namespace gammareg
