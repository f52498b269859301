#include "snt/matio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace snt {

namespace {

// Recursive descent over a single token:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 'sqrt' '(' expr ')' | '(' expr ')'
class ValueParser {
 public:
  explicit ValueParser(const std::string& s) : m_s(s) {}

  double run() {
    const double v = expr();
    if (m_pos != m_s.size()) {
      throw ParseError("trailing characters in value '" + m_s + "'");
    }
    return v;
  }

 private:
  double expr() {
    double v = term();
    while (peek() == '+' || peek() == '-') {
      const char op = take();
      const double rhs = term();
      v = (op == '+') ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (peek() == '*' || peek() == '/') {
      const char op = take();
      const double rhs = unary();
      if (op == '/') {
        if (rhs == 0.0) throw ParseError("division by zero in '" + m_s + "'");
        v /= rhs;
      } else {
        v *= rhs;
      }
    }
    return v;
  }

  double unary() {
    if (peek() == '-') {
      take();
      return -unary();
    }
    if (peek() == '+') {
      take();
      return unary();
    }
    return primary();
  }

  double primary() {
    if (m_s.compare(m_pos, 5, "sqrt(") == 0) {
      m_pos += 5;
      const double inner = expr();
      expect(')');
      if (inner < 0.0) {
        throw ParseError("sqrt of negative value in '" + m_s + "'");
      }
      return std::sqrt(inner);
    }
    if (peek() == '(') {
      take();
      const double inner = expr();
      expect(')');
      return inner;
    }
    return number();
  }

  double number() {
    const char* start = m_s.c_str() + m_pos;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) {
      throw ParseError("expected a number in '" + m_s + "' at position " +
                       std::to_string(m_pos));
    }
    m_pos += static_cast<size_t>(end - start);
    return v;
  }

  char peek() const { return m_pos < m_s.size() ? m_s[m_pos] : '\0'; }
  char take() { return m_s[m_pos++]; }
  void expect(char c) {
    if (peek() != c) {
      throw ParseError(std::string("expected '") + c + "' in '" + m_s + "'");
    }
    take();
  }

  const std::string& m_s;
  size_t m_pos = 0;
};

std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string tok;
    while (row >> tok) tokens.push_back(tok);
  }
  return tokens;
}

long parse_dim(const std::string& tok) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad matrix dimension '" + tok + "'");
  }
  if (pos != tok.size() || v <= 0) {
    throw ParseError("bad matrix dimension '" + tok + "'");
  }
  return v;
}

}  // namespace

double parse_value(const std::string& token) {
  return ValueParser(token).run();
}

Matrix read_matrix(std::istream& in) {
  const std::vector<std::string> tokens = tokenize(in);
  if (tokens.empty()) throw ParseError("empty matrix input");

  const long rows = parse_dim(tokens[0]);
  size_t at = 1;
  long cols = rows;
  // a second header token is a column count when the remaining token count
  // matches rows*that rather than rows*rows
  if (tokens.size() >= 2) {
    const size_t remaining = tokens.size() - 1;
    if (remaining != static_cast<size_t>(rows * rows)) {
      cols = parse_dim(tokens[1]);
      at = 2;
    }
  }
  if (tokens.size() - at != static_cast<size_t>(rows * cols)) {
    throw ParseError("expected " + std::to_string(rows * cols) +
                     " matrix entries, found " +
                     std::to_string(tokens.size() - at));
  }

  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      m(i, j) = parse_value(tokens[at++]);
    }
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  try {
    return read_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_matrix(std::ostream& out, const Matrix& m) {
  if (m.rows() == m.cols()) {
    out << m.rows() << "\n";
  } else {
    out << m.rows() << " " << m.cols() << "\n";
  }
  char buf[64];
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_matrix(out, m);
}

}  // namespace snt
