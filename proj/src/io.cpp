#include "starinv/io.hpp"

#include "starinv/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

namespace starinv::io {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw SpectralError(ErrorKind::InvalidInput, what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, int line_no) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    fail("line " + std::to_string(line_no) + ": not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text, int line_no) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    fail("line " + std::to_string(line_no) + ": not an integer: '" + text + "'");
  return v;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

Csv read_csv(std::istream& in) {
  Csv csv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (csv.header.empty()) {
      csv.header = std::move(cells);
      continue;
    }
    if (cells.size() != csv.header.size())
      fail("line " + std::to_string(line_no) + ": expected " +
           std::to_string(csv.header.size()) + " columns");
    csv.rows.push_back(std::move(cells));
    csv.line_numbers.push_back(line_no);
  }
  if (csv.header.empty()) fail("empty CSV input");
  return csv;
}

void expect_header(const Csv& csv, const std::vector<std::string>& expected) {
  if (csv.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    fail("expected CSV header '" + want + "'");
  }
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  return in;
}

// Validates x samples and returns the grid size.
void check_grid(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) fail("a grid needs at least 3 rows");
  const double h = std::numbers::pi / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = double(i) * h;
    if (std::abs(x[i] - expected) > 1e-9 * std::max(1.0, expected))
      fail("x column is not a uniform grid over [0, pi] (row " + std::to_string(i + 1) + ")");
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

GridFunction read_potential(std::istream& in) {
  const Csv csv = read_csv(in);
  const bool named_edge = csv.header.size() == 2 && csv.header[1].size() > 1 &&
                          csv.header[1][0] == 'q' &&
                          csv.header[1].find_first_not_of("0123456789", 1) == std::string::npos;
  if (!named_edge) expect_header(csv, {"x", "q"});
  std::vector<double> x;
  Eigen::VectorXd q(Eigen::Index(csv.rows.size()));
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    x.push_back(parse_double(csv.rows[i][0], csv.line_numbers[i]));
    q[Eigen::Index(i)] = parse_double(csv.rows[i][1], csv.line_numbers[i]);
  }
  check_grid(x);
  return GridFunction(std::move(q));
}

GridFunction read_potential_file(const std::string& path) {
  auto in = open(path);
  return read_potential(in);
}

void write_potential(std::ostream& out, const GridFunction& q, const std::string& column) {
  out << "x," << column << "\n";
  for (int i = 0; i < q.n_points(); ++i)
    out << format_double(q.x(i)) << "," << format_double(q[i]) << "\n";
}

StarGraphProblem read_problem(std::istream& in) {
  const Csv csv = read_csv(in);
  const std::size_t cols = csv.header.size();
  if (cols < 3 || csv.header[0] != "x") fail("problem header must be 'x,q1,...,qm' with m >= 2");
  for (std::size_t j = 1; j < cols; ++j)
    if (csv.header[j] != "q" + std::to_string(j))
      fail("problem header column " + std::to_string(j + 1) + " must be 'q" + std::to_string(j) +
           "'");
  std::vector<double> x;
  std::vector<Eigen::VectorXd> q(cols - 1, Eigen::VectorXd(Eigen::Index(csv.rows.size())));
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    x.push_back(parse_double(csv.rows[i][0], csv.line_numbers[i]));
    for (std::size_t j = 1; j < cols; ++j)
      q[j - 1][Eigen::Index(i)] = parse_double(csv.rows[i][j], csv.line_numbers[i]);
  }
  check_grid(x);
  std::vector<GridFunction> potentials;
  for (auto& v : q) potentials.emplace_back(std::move(v));
  return StarGraphProblem(std::move(potentials));
}

StarGraphProblem read_problem_file(const std::string& path) {
  auto in = open(path);
  return read_problem(in);
}

void write_problem(std::ostream& out, const StarGraphProblem& problem) {
  out << "x";
  for (int j = 1; j <= problem.m(); ++j) out << ",q" << j;
  out << "\n";
  const auto& first = problem.potential(1);
  for (int i = 0; i < first.n_points(); ++i) {
    out << format_double(first.x(i));
    for (int j = 1; j <= problem.m(); ++j) out << "," << format_double(problem.potential(j)[i]);
    out << "\n";
  }
}

SpectrumTable read_spectrum(std::istream& in) {
  const Csv csv = read_csv(in);
  expect_header(csv, {"n", "k", "lambda", "multiplicity"});
  SpectrumTable table;
  table.omega_hat = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const int line = csv.line_numbers[i];
    SpectrumEntry e{parse_int(csv.rows[i][0], line), parse_int(csv.rows[i][1], line),
                    parse_double(csv.rows[i][2], line), parse_int(csv.rows[i][3], line)};
    if (e.n < 1 || e.k < 1 || e.multiplicity < 1)
      fail("line " + std::to_string(line) + ": n, k and multiplicity must be positive");
    if (!std::isfinite(e.lambda)) fail("line " + std::to_string(line) + ": lambda must be finite");
    if (table.find(e.n, e.k)) fail("line " + std::to_string(line) + ": duplicate label (n, k)");
    table.entries.push_back(e);
  }
  table.sort();
  return table;
}

SpectrumTable read_spectrum_file(const std::string& path) {
  auto in = open(path);
  return read_spectrum(in);
}

void write_spectrum(std::ostream& out, const SpectrumTable& table) {
  SpectrumTable sorted = table;
  sorted.sort();
  out << "n,k,lambda,multiplicity\n";
  for (const auto& e : sorted.entries)
    out << e.n << "," << e.k << "," << format_double(e.lambda) << "," << e.multiplicity << "\n";
}

GTable read_g_table(std::istream& in) {
  const Csv csv = read_csv(in);
  expect_header(csv, {"n", "k", "g"});
  GTable table;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const int line = csv.line_numbers[i];
    const int n = parse_int(csv.rows[i][0], line), k = parse_int(csv.rows[i][1], line);
    if (csv.rows[i][2] == "inf")
      table.set_infinite(n, k);
    else
      table.set(n, k, parse_double(csv.rows[i][2], line));
  }
  return table;
}

GTable read_g_table_file(const std::string& path) {
  auto in = open(path);
  return read_g_table(in);
}

void write_g_table(std::ostream& out, const GTable& table) {
  out << "n,k,g\n";
  std::vector<std::pair<std::pair<int, int>, double>> rows(table.values().begin(),
                                                           table.values().end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.second != b.first.second ? a.first.second < b.first.second
                                            : a.first.first < b.first.first;
  });
  for (const auto& [label, g] : rows)
    out << label.first << "," << label.second << "," << (std::isinf(g) ? "inf" : format_double(g))
        << "\n";
}

void write_cauchy(std::ostream& out, const CauchyData& cauchy) {
  out << "t,N,K\n";
  for (int i = 0; i < cauchy.n_func.n_points(); ++i)
    out << format_double(cauchy.n_func.x(i)) << "," << format_double(cauchy.n_func[i]) << ","
        << format_double(cauchy.k_func[i]) << "\n";
}

}  // namespace starinv::io
