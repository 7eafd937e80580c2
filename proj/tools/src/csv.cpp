#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace kwopt_cli {

namespace {

constexpr const char* kCurveHeader = "k,mean_abs_error,std_error,n_paths_effective,diverged";
constexpr const char* kSummaryHeader =
    "experiment_id,slope,intercept,r_squared,fit_lo,fit_hi,config";

std::string quote(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot open for writing: " + path);
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw CsvError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// One record, fields split on unquoted commas, doubled quotes collapsed.
std::vector<std::string> split_fields(const std::string& line, const std::string& where) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw CsvError(where + ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::uint64_t parse_uint(const std::string& s, const std::string& where) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw CsvError(where + ": \"" + s + "\" is not a non-negative integer");
  }
  return v;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw CsvError(where + ": \"" + s + "\" is not a number");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_curve_csv(const std::string& path, const kwopt::ErrorCurve& curve) {
  std::ofstream out = open_for_write(path);
  out << kCurveHeader << "\n";
  const std::uint64_t n_eff = curve.n_paths - curve.diverged;
  for (std::size_t i = 0; i < curve.checkpoints.size(); ++i) {
    out << curve.checkpoints[i] << ',' << format_double(curve.mean_abs_error[i])
        << ',' << format_double(curve.std_error[i]) << ',' << n_eff << ','
        << curve.diverged << "\n";
  }
  finish_write(out, path);
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_for_write(path);
  out << kSummaryHeader << "\n";
  for (const SummaryRow& row : rows) {
    out << row.id << ',';
    if (row.has_fit) {
      out << format_double(row.fit.slope) << ',' << format_double(row.fit.intercept)
          << ',' << format_double(row.fit.r_squared) << ',' << row.fit_lo << ','
          << row.fit_hi << ',';
    } else {
      out << ",,,,,";
    }
    out << quote(row.config) << "\n";
  }
  finish_write(out, path);
}

CurveData read_curve_csv(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  if (lines.empty() || lines.front() != kCurveHeader) {
    throw CsvError(path + ": expected header \"" + kCurveHeader + "\"");
  }
  CurveData data;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    const std::vector<std::string> f = split_fields(lines[i], where);
    if (f.size() != 5) {
      throw CsvError(where + ": expected 5 fields, got " + std::to_string(f.size()));
    }
    data.checkpoints.push_back(parse_uint(f[0], where));
    data.mean_abs_error.push_back(parse_double(f[1], where));
    data.std_error.push_back(parse_double(f[2], where));
    data.n_paths_effective.push_back(parse_uint(f[3], where));
    data.diverged.push_back(parse_uint(f[4], where));
  }
  if (data.checkpoints.empty()) throw CsvError(path + ": no data rows");
  return data;
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  if (lines.empty() || lines.front() != kSummaryHeader) {
    throw CsvError(path + ": expected header \"" + kSummaryHeader + "\"");
  }
  std::vector<SummaryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    const std::vector<std::string> f = split_fields(lines[i], where);
    if (f.size() != 7) {
      throw CsvError(where + ": expected 7 fields, got " + std::to_string(f.size()));
    }
    SummaryRow row;
    row.id = f[0];
    const bool fit_empty = f[1].empty() && f[2].empty() && f[3].empty() &&
                           f[4].empty() && f[5].empty();
    if (!fit_empty) {
      row.has_fit = true;
      row.fit.slope = parse_double(f[1], where);
      row.fit.intercept = parse_double(f[2], where);
      row.fit.r_squared = parse_double(f[3], where);
      row.fit_lo = parse_uint(f[4], where);
      row.fit_hi = parse_uint(f[5], where);
    }
    row.config = f[6];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kwopt_cli
