#include "precis/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace precis {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  const bool delimited = line.find('\t') != std::string::npos || line.find(',') != std::string::npos;
  if (delimited) {
    std::string field;
    for (char ch : line) {
      if (ch == '\t' || ch == ',') {
        out.push_back(trim(field));
        field.clear();
      } else {
        field.push_back(ch);
      }
    }
    out.push_back(trim(field));
  } else {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
  }
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second)
      throw ParseError("config line " + std::to_string(lineno) + ": duplicate key " + key);
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_config(in);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParseError("invalid number for " + what + ": '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParseError("invalid integer for " + what + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ParseError("invalid boolean for " + what + ": '" + text + "'");
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > 0.0) || count == 0) throw std::invalid_argument("log grid needs lo, hi > 0 and count >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("log:", 0) == 0 || t.rfind("lin:", 0) == 0) {
    const auto parts = split_list(t.substr(4), ':');
    if (parts.size() != 3) throw ParseError("grid form is " + t.substr(0, 3) + ":lo:hi:count");
    const double lo = parse_double(parts[0], "grid lo");
    const double hi = parse_double(parts[1], "grid hi");
    const long long count = parse_integer(parts[2], "grid count");
    if (count < 1) throw ParseError("grid count must be positive");
    if (t[1] == 'o') {
      if (!(lo > 0.0 && hi > 0.0)) throw ParseError("log grid bounds must be positive");
      return log_grid(lo, hi, static_cast<std::size_t>(count));
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i)
      out[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split_list(t)) out.push_back(parse_double(item, "grid"));
  if (out.empty()) throw ParseError("grid is empty");
  return out;
}

ExpressionMatrix read_expression(std::istream& in, const ExpressionLayout& layout) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    lines.push_back(split_fields(line));
  }
  if (lines.empty()) throw ParseError("expression file is empty");

  std::vector<std::string> col_labels;
  std::size_t first_data = 0;
  if (layout.header) {
    col_labels = lines[0];
    first_data = 1;
  }
  const std::size_t skip = layout.row_labels ? 1 : 0;
  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> table;
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    const auto& f = lines[r];
    if (f.size() <= skip) throw ParseError("expression line " + std::to_string(r + 1) + " has no values");
    row_labels.push_back(skip ? f[0] : "row" + std::to_string(r - first_data));
    std::vector<double> vals;
    for (std::size_t c = skip; c < f.size(); ++c)
      vals.push_back(parse_double(f[c], "expression line " + std::to_string(r + 1)));
    if (!table.empty() && vals.size() != table.front().size())
      throw ParseError("expression line " + std::to_string(r + 1) + " has a different field count");
    table.push_back(std::move(vals));
  }
  if (table.empty()) throw ParseError("expression file has no data lines");
  const std::size_t width = table.front().size();
  if (layout.header) {
    // a header may or may not carry a corner label above the row labels
    if (col_labels.size() == width + skip) col_labels.erase(col_labels.begin(), col_labels.begin() + static_cast<long>(skip));
    if (col_labels.size() != width) throw ParseError("header field count does not match the data");
  } else {
    for (std::size_t c = 0; c < width; ++c) col_labels.push_back("col" + std::to_string(c));
  }

  const std::size_t samples = layout.genes_in_columns ? table.size() : width;
  const std::size_t genes = layout.genes_in_columns ? width : table.size();
  const auto& gene_labels = layout.genes_in_columns ? col_labels : row_labels;
  const auto value = [&](std::size_t s, std::size_t g) {
    return layout.genes_in_columns ? table[s][g] : table[g][s];
  };

  std::vector<std::size_t> keep;
  ExpressionMatrix out;
  for (std::size_t g = 0; g < genes; ++g) {
    bool constant = true;
    for (std::size_t s = 1; s < samples && constant; ++s) constant = value(s, g) == value(0, g);
    if (constant)
      out.dropped.push_back(gene_labels[g]);
    else
      keep.push_back(g);
  }
  out.values = Matrix(samples, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.genes.push_back(gene_labels[keep[k]]);
    for (std::size_t s = 0; s < samples; ++s) out.values(s, k) = value(s, keep[k]);
  }
  return out;
}

ExpressionMatrix read_expression_file(const std::string& path, const ExpressionLayout& layout) {
  auto in = open_or_throw(path);
  return read_expression(in, layout);
}

void write_expression(std::ostream& out, const ExpressionMatrix& m) {
  out << "sample";
  for (const auto& g : m.genes) out << '\t' << g;
  out << '\n';
  char buf[40];
  for (std::size_t s = 0; s < m.values.rows(); ++s) {
    out << 's' << s;
    for (std::size_t g = 0; g < m.values.cols(); ++g) {
      std::snprintf(buf, sizeof buf, "%.10g", m.values(s, g));
      out << '\t' << buf;
    }
    out << '\n';
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace precis
