#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "precis/matops.hpp"

namespace precis {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text. Blank lines and `#` comments are skipped; keys are
/// case-sensitive with '-' normalised to '_'. A repeated key is an error.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> read_config_file(const std::string& path);

std::vector<std::string> split_list(const std::string& text, char sep = ',');
double parse_double(const std::string& text, const std::string& what);
long long parse_integer(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

/// Comma list of numbers, or `log:lo:hi:count` / `lin:lo:hi:count`.
std::vector<double> parse_grid(const std::string& text);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct ExpressionLayout {
  bool genes_in_columns = true;  // samples are rows
  bool header = true;            // first line holds labels
  bool row_labels = true;        // first field of every data line is a label
};

struct ExpressionMatrix {
  std::vector<std::string> genes;
  Matrix values;  // samples x genes
  std::vector<std::string> dropped;  // constant genes removed on load
};

/// Tab, comma or whitespace separated. Constant genes are dropped because
/// they cannot be standardised.
ExpressionMatrix read_expression(std::istream& in, const ExpressionLayout& layout = {});
ExpressionMatrix read_expression_file(const std::string& path, const ExpressionLayout& layout = {});
/// Tab separated, genes as columns, with a header and sample labels.
void write_expression(std::ostream& out, const ExpressionMatrix& m);

/// printf %.12g; "nan"/"inf" spelled out.
std::string format_number(double v);

}  // namespace precis
