#include "spectral_poisson/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "spectral_poisson/errors.hpp"

namespace spoisson::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    std::ostringstream os;
    os << "line " << line << ": cannot parse '" << s << "' as a number";
    throw PreconditionError(os.str());
  }
  return v;
}

void expect_shape(const CsvFile& f, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (f.values.rows() != rows || f.values.cols() != cols) {
    std::ostringstream os;
    os << what << ": expected " << rows << " x " << cols << " values, got " << f.values.rows() << " x "
       << f.values.cols();
    throw PreconditionError(os.str());
  }
}

void expect_value(const CsvFile& f, const std::string& key, const std::string& value) {
  if (f.get(key) != value)
    throw PreconditionError("header key " + key + " must be '" + value + "', got '" + f.get(key) + "'");
}

}  // namespace

bool CsvFile::has(const std::string& key) const {
  return std::any_of(header.begin(), header.end(), [&](const auto& kv) { return kv.first == key; });
}

std::string CsvFile::get(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return v;
  throw PreconditionError("missing header key '" + key + "'");
}

int CsvFile::get_int(const std::string& key) const {
  const std::string v = get(key);
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size()) throw PreconditionError("header key " + key + " is not an integer");
  return static_cast<int>(x);
}

void CsvFile::require_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : header)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw PreconditionError("unknown header key '" + k + "'");
}

CsvFile parse_csv(const std::string& text) {
  CsvFile f;
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (header_seen || !rows.empty()) throw PreconditionError("only one header line is allowed, first in the file");
      header_seen = true;
      for (const std::string& item : split(t.substr(1), ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw PreconditionError("malformed header item '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        if (f.has(key)) throw PreconditionError("duplicate header key '" + key + "'");
        f.header.emplace_back(key, trim(item.substr(eq + 1)));
      }
      continue;
    }
    std::vector<double> row;
    for (const std::string& cell : split(t, ',')) row.push_back(parse_double(cell, lineno));
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "line " << lineno << ": expected " << rows.front().size() << " columns, got " << row.size();
      throw PreconditionError(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw PreconditionError("missing header line");
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(rows.front().size()) : 0;
  f.values.resize(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) f.values(i, j) = rows[i][j];
  return f;
}

std::string format_csv(const CsvFile& f) {
  std::string out = "#";
  for (std::size_t i = 0; i < f.header.size(); ++i)
    out += (i ? ", " : " ") + f.header[i].first + "=" + f.header[i].second;
  out += "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", f.values(i, j));
      if (j) out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
  if (!out) throw PreconditionError("write to '" + path + "' failed");
}

CoeffMatrix2D load_square_rhs(const CsvFile& f) {
  const int n = f.get_int("n");
  if (n < 1) throw PreconditionError("n must be >= 1");
  expect_shape(f, n, n, "square right-hand side");
  if (f.has("grid_x")) {
    f.require_keys({"grid_x", "grid_y", "n"});
    expect_value(f, "grid_x", "chebyshev");
    expect_value(f, "grid_y", "chebyshev");
    return {cheb_transform_2d(f.values), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
  }
  f.require_keys({"basis_x", "basis_y", "n"});
  const BasisTag bx = parse_basis_tag(f.get("basis_x")), by = parse_basis_tag(f.get("basis_y"));
  if (bx == BasisTag::FourierComplex || by == BasisTag::FourierComplex)
    throw PreconditionError("square right-hand side cannot use a Fourier basis");
  return convert(CoeffMatrix2D{f.values, bx, by}, BasisTag::ChebyshevT, BasisTag::ChebyshevT);
}

EdgeData load_edges(const CsvFile& f) {
  f.require_keys({"edges", "n"});
  expect_value(f, "edges", "chebyshev");
  const int n = f.get_int("n");
  if (n < 2) throw PreconditionError("edge data needs n >= 2");
  expect_shape(f, n, 4, "edge data");
  const Eigen::MatrixXd C = cheb_vals2coeffs_matrix(n) * f.values;
  return {C.col(0), C.col(1), C.col(2), C.col(3)};
}

FDProblem load_fd_rhs(const CsvFile& f) {
  f.require_keys({"grid_x", "grid_y", "n"});
  expect_value(f, "grid_x", "uniform");
  expect_value(f, "grid_y", "uniform");
  const int n = f.get_int("n");
  if (n < 2) throw PreconditionError("finite-difference grid needs n >= 2");
  expect_shape(f, n - 1, n - 1, "finite-difference right-hand side");
  return {n, f.values};
}

CylinderInput load_cylinder_rhs(const CsvFile& f) {
  CylinderInput in;
  const int n = f.get_int("n");
  if (n < 2 || n % 2) throw PreconditionError("cylinder input needs an even n >= 2");
  if (f.has("grid_r")) {
    f.require_keys({"grid_r", "grid_theta", "grid_z", "n"});
    expect_value(f, "grid_r", "chebyshev_half");
    expect_value(f, "grid_theta", "uniform");
    expect_value(f, "grid_z", "chebyshev");
    expect_shape(f, static_cast<Eigen::Index>(n / 2) * n, n, "cylinder samples");
    in.samples.n = n;
    in.samples.slices.assign(n, Eigen::MatrixXd(n / 2, n));
    for (int i = 0; i < n / 2; ++i)
      for (int t = 0; t < n; ++t) in.samples.slices[t].row(i) = f.values.row(static_cast<Eigen::Index>(i) * n + t);
    return in;
  }
  f.require_keys({"basis_r", "basis_theta", "basis_z", "n"});
  expect_value(f, "basis_r", "chebyshev");
  expect_value(f, "basis_theta", "fourier");
  expect_value(f, "basis_z", "chebyshev");
  expect_shape(f, static_cast<Eigen::Index>(n) * n, 2 * n, "cylinder coefficients");
  in.is_coeffs = true;
  in.modes.assign(n, Eigen::MatrixXcd(n, n));
  for (int t = 0; t < n; ++t) {
    const auto blk = f.values.middleRows(static_cast<Eigen::Index>(t) * n, n);
    in.modes[t].real() = blk.leftCols(n);
    in.modes[t].imag() = blk.rightCols(n);
  }
  return in;
}

Eigen::MatrixXd load_cube_rhs(const CsvFile& f) {
  const int n = f.get_int("n");
  if (n < 1) throw PreconditionError("n must be >= 1");
  expect_shape(f, static_cast<Eigen::Index>(n) * n, n, "cube right-hand side");
  // the CSV layout (row i + n j, column k) and the n x n^2 tensor share one memory order
  const Eigen::MatrixXd T = Eigen::Map<const Eigen::MatrixXd>(f.values.data(), n, static_cast<Eigen::Index>(n) * n);
  if (f.has("grid_x")) {
    f.require_keys({"grid_x", "grid_y", "grid_z", "n"});
    for (const char* k : {"grid_x", "grid_y", "grid_z"}) expect_value(f, k, "chebyshev");
    return cheb_coeffs_3d(T);
  }
  f.require_keys({"basis_x", "basis_y", "basis_z", "n"});
  for (const char* k : {"basis_x", "basis_y", "basis_z"}) expect_value(f, k, "chebyshev");
  return T;
}

CsvFile square_output(const CoeffMatrix2D& cheb) {
  CsvFile f;
  f.header = {{"basis_x", to_string(cheb.basis_x)},
              {"basis_y", to_string(cheb.basis_y)},
              {"n", std::to_string(cheb.values.rows())}};
  f.values = cheb.values;
  return f;
}

CsvFile fd_output(int n, const Eigen::MatrixXd& X) {
  CsvFile f;
  f.header = {{"grid_x", "uniform"}, {"grid_y", "uniform"}, {"n", std::to_string(n)}};
  f.values = X;
  return f;
}

CsvFile cylinder_output(const CylinderSolution& sol) {
  const int n = sol.n, m = n + 4;
  CsvFile f;
  f.header = {{"basis_r", "chebyshev"}, {"basis_theta", "fourier"}, {"basis_z", "chebyshev"}, {"n", std::to_string(m)}};
  f.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m) * m, 2 * m);
  for (const ModeSolution& mode : sol.modes) {
    const Eigen::MatrixXcd C = mode.to_chebyshev();
    const Eigen::Index row0 = static_cast<Eigen::Index>(mode.k + m / 2) * m;
    f.values.block(row0, 0, C.rows(), C.cols()) = C.real();
    f.values.block(row0, m, C.rows(), C.cols()) = C.imag();
  }
  return f;
}

CsvFile cube_output(const CubeSolution& sol) {
  const Eigen::MatrixXd C = sol.to_chebyshev();
  const Eigen::Index m = C.rows();
  CsvFile f;
  f.header = {{"basis_x", "chebyshev"}, {"basis_y", "chebyshev"}, {"basis_z", "chebyshev"}, {"n", std::to_string(m)}};
  f.values = Eigen::Map<const Eigen::MatrixXd>(C.data(), m * m, m);
  return f;
}

std::string report_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["solver"] = r.solver;
  j["n"] = r.n;
  j["eps"] = r.eps;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["seconds"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.seconds) j["seconds"][k] = v;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

}  // namespace spoisson::io
