#include "spectral_poisson/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/io.hpp"
#include "spectral_poisson/parallel.hpp"
#include "spectral_poisson/poisson_cube.hpp"
#include "spectral_poisson/poisson_cylinder.hpp"
#include "spectral_poisson/poisson_fd.hpp"
#include "spectral_poisson/poisson_square.hpp"
#include "spectral_poisson/zolotarev.hpp"

namespace spoisson::cli {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Rectangle parse_domain(const std::string& s) {
  std::vector<double> v;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw PreconditionError("--domain expects a,b,c,d");
    v.push_back(x);
  }
  if (v.size() != 4) throw PreconditionError("--domain expects four values a,b,c,d");
  const Rectangle r{v[0], v[1], v[2], v[3]};
  check_rectangle(r);
  return r;
}

void emit_outputs(const SolveReport& rep, const io::CsvFile* csv, const std::string& out_path,
                  const std::string& report_path, std::ostream& out) {
  if (csv && !out_path.empty()) io::write_text(out_path, io::format_csv(*csv));
  if (!report_path.empty()) io::write_text(report_path, io::report_json(rep));
  out << "solver=" << rep.solver << " n=" << rep.n << " iterations=" << rep.iterations
      << " residual=" << fmt17(rep.residual) << "\n";
}

struct SolveArgs {
  int n = 0;
  double eps = 0.0;
  std::string rhs, out, report;
};

void add_solve_options(CLI::App* sub, SolveArgs& a, double default_eps) {
  a.eps = default_eps;
  sub->add_option("--n", a.n, "discretization size (default: from the input file)");
  sub->add_option("--eps", a.eps, "ADI tolerance")->capture_default_str();
  sub->add_option("--rhs", a.rhs, "right-hand side CSV")->required();
  sub->add_option("--out", a.out, "output CSV");
  sub->add_option("--report", a.report, "report JSON");
}

// Square, rectangle and Dirichlet problems.
int cmd_square(const SolveArgs& a, const std::string& edges, const std::string& domain, bool rect,
               int iterations, const std::string& count, std::ostream& out) {
  const CoeffMatrix2D f = io::load_square_rhs(io::read_csv(a.rhs));
  SquareOptions o;
  o.n = a.n;
  o.iterations = iterations;
  o.count = parse_count_formula(count);
  const Rectangle dom = domain.empty() ? Rectangle{} : parse_domain(domain);
  SolveReport rep;
  io::CsvFile csv;
  if (!edges.empty()) {
    const EdgeData g = io::load_edges(io::read_csv(edges));
    csv = io::square_output(solve_dirichlet(f, g, a.eps, dom, &rep, o).to_chebyshev());
  } else if (rect || !domain.empty()) {
    csv = io::square_output(solve_rectangle(f, dom, a.eps, &rep, o).to_chebyshev());
  } else {
    csv = io::square_output(solve_square(f, a.eps, &rep, o).to_chebyshev());
  }
  emit_outputs(rep, &csv, a.out, a.report, out);
  return 0;
}

int cmd_fd(const SolveArgs& a, const std::string& method, int iterations, const std::string& count,
           std::ostream& out) {
  const FDProblem prob = io::load_fd_rhs(io::read_csv(a.rhs));
  if (a.n && a.n != prob.n) throw PreconditionError("--n does not match the n of the input file");
  SolveReport rep;
  Eigen::MatrixXd X;
  if (method == "adi") {
    FDOptions o;
    o.iterations = iterations;
    o.count = parse_count_formula(count);
    X = solve_fd_adi(prob, a.eps, &rep, o);
  } else if (method == "dst") {
    X = solve_fd_dst(prob, &rep);
  } else {
    throw PreconditionError("--method must be adi or dst");
  }
  const io::CsvFile csv = io::fd_output(prob.n, X);
  emit_outputs(rep, &csv, a.out, a.report, out);
  return 0;
}

int cmd_cylinder(const SolveArgs& a, int threads, std::ostream& out) {
  const io::CylinderInput in = io::load_cylinder_rhs(io::read_csv(a.rhs));
  const int n = in.is_coeffs ? static_cast<int>(in.modes.size()) : in.samples.n;
  if (a.n && a.n != n) throw PreconditionError("--n does not match the n of the input file");
  SolveReport rep;
  CylinderOptions o;
  o.threads = threads;
  const CylinderSolution sol =
      in.is_coeffs ? solve_cylinder(in.modes, a.eps, &rep, o) : solve_cylinder(in.samples, a.eps, &rep, o);
  const io::CsvFile csv = io::cylinder_output(sol);
  emit_outputs(rep, &csv, a.out, a.report, out);
  return 0;
}

int cmd_cube(const SolveArgs& a, int max_n, std::ostream& out, std::ostream& err) {
  const Eigen::MatrixXd f = io::load_cube_rhs(io::read_csv(a.rhs));
  if (a.n && a.n != f.rows()) throw PreconditionError("--n does not match the n of the input file");
  const std::string note = "the cube solver is experimental (nested ADI, desk-scale sizes only)";
  err << "warning: " << note << "\n";
  SolveReport rep;
  CubeOptions o;
  o.max_n = max_n;
  const CubeSolution sol = solve_cube(f, a.eps, &rep, o);
  rep.warnings.push_back(note);
  const io::CsvFile csv = io::cube_output(sol);
  emit_outputs(rep, &csv, a.out, a.report, out);
  return 0;
}

int cmd_shifts(double a, double b, double c, double d, double eps, int iterations, const std::string& path,
               std::ostream& out) {
  const SpectralIntervals iv{a, b, c, d};
  const ShiftSchedule s = iterations > 0 ? adi_shifts_for(iv, iterations) : adi_shifts(iv, eps);
  std::string text = "# J=" + std::to_string(s.iterations()) + "\nj,p,q\n";
  for (int j = 0; j < s.iterations(); ++j) text += std::to_string(j) + "," + fmt17(s.p[j]) + "," + fmt17(s.q[j]) + "\n";
  if (path.empty()) out << text;
  else io::write_text(path, text);
  return 0;
}

int cmd_verify_bounds(int n, std::ostream& out) {
  if (n < 1) throw PreconditionError("--n must be >= 1");
  const SquareDiscretization d = assemble_square(n);
  const Interval g = square_gershgorin(d);
  const Interval e = square_eigen_range(d);
  const bool ok = g.lo >= -1.0 && g.hi <= -d.delta;
  out << "n,delta,gershgorin_lo,gershgorin_hi,eig_lo,eig_hi,contained\n"
      << n << "," << fmt17(d.delta) << "," << fmt17(g.lo) << "," << fmt17(g.hi) << "," << fmt17(e.lo) << ","
      << fmt17(e.hi) << "," << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 2;
}

struct BenchRow {
  int n;
  double adi, transform;
  int iterations;
  double residual;
};

// Deterministic smooth data: coefficient decay 1/((1+i)^2 (1+j)^2).
Eigen::MatrixXd decaying(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd F(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) F(i, j) = 1.0 / ((1.0 + i) * (1.0 + i) * (1.0 + j % rows) * (1.0 + j % rows));
  return F;
}

BenchRow bench_one(const std::string& solver, int n, double eps, int reps, int threads) {
  std::vector<double> adi, transform;
  SolveReport last;
  for (int r = 0; r < reps; ++r) {
    SolveReport rep;
    if (solver == "square") {
      solve_square(CoeffMatrix2D{decaying(n, n)}, eps, &rep);
      adi.push_back(rep.stage("adi"));
      transform.push_back(rep.stage("rhs_to_ultra") + rep.stage("setup") + rep.stage("recover"));
    } else if (solver == "fd") {
      const FDProblem prob{n, Eigen::MatrixXd::Ones(n - 1, n - 1)};
      Stopwatch clock;
      solve_fd_adi(prob, eps, &rep);
      adi.push_back(clock.lap());
      solve_fd_dst(prob);
      transform.push_back(clock.lap());
    } else if (solver == "cylinder") {
      CylinderOptions o;
      o.threads = threads;
      const auto f = [](double r, double t, double z) { return std::exp(z) * r * r * std::cos(t) + r * r * std::sin(2 * t); };
      solve_cylinder(sample_cylinder(f, n), eps, &rep, o);
      adi.push_back(rep.stage("modes"));
      transform.push_back(rep.stage("transform") + rep.stage("rhs_to_ultra"));
    } else if (solver == "cube") {
      solve_cube(decaying(n, static_cast<Eigen::Index>(n) * n), eps, &rep);
      adi.push_back(rep.stage("adi"));
      transform.push_back(rep.stage("rhs_to_ultra") + rep.stage("recover"));
    } else {
      throw PreconditionError("--solver must be square, fd, cylinder or cube");
    }
    last = rep;
  }
  return {n, median(adi), median(transform), last.iterations, last.residual};
}

int cmd_bench(const std::string& solver, int nmin, int nmax, double eps, int reps, int threads,
              const std::string& path, std::ostream& out) {
  if (nmin < 2 || nmax < nmin) throw PreconditionError("bench needs 2 <= nmin <= nmax");
  if (reps < 1) throw PreconditionError("--reps must be >= 1");
  std::string text = "n,adi_seconds,transform_seconds,iterations,residual\n";
  for (int n = nmin; n <= nmax; n *= 2) {
    const BenchRow r = bench_one(solver, n, eps, reps, threads);
    const std::string line = std::to_string(r.n) + "," + fmt17(r.adi) + "," + fmt17(r.transform) + "," +
                             std::to_string(r.iterations) + "," + fmt17(r.residual) + "\n";
    text += line;
    if (path.empty()) out << (n == nmin ? text : line) << std::flush;
  }
  if (!path.empty()) io::write_text(path, text);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fast Poisson solvers by alternating direction implicit iterations"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads_flag = 0;
  app.add_option("--threads", threads_flag, "worker threads (default: SPECTRAL_POISSON_THREADS or 1)");

  double sa = 0, sb = 0, sc = 0, sd = 0, seps = 1e-6;
  int siters = 0;
  std::string sout;
  auto* shifts = app.add_subcommand("shifts", "optimal ADI shifts for [a,b] and [c,d]");
  shifts->add_option("--a", sa)->required();
  shifts->add_option("--b", sb)->required();
  shifts->add_option("--c", sc)->required();
  shifts->add_option("--d", sd)->required();
  shifts->add_option("--eps", seps)->capture_default_str();
  shifts->add_option("--iterations", siters, "fixed iteration count (overrides --eps)");
  shifts->add_option("--out", sout, "output CSV (default: standard output)");

  SolveArgs sq_args, rect_args, fd_args, cyl_args, cube_args;
  std::string sq_edges, sq_domain, rect_edges, rect_domain, sq_count = "general", rect_count = "general";
  int sq_iters = 0, rect_iters = 0;
  auto* square = app.add_subcommand("solve-square", "spectral solver on [-1,1]^2 or a rectangle");
  add_solve_options(square, sq_args, 1e-13);
  square->add_option("--edges", sq_edges, "Dirichlet edge samples CSV");
  square->add_option("--domain", sq_domain, "rectangle a,b,c,d for [a,b] x [c,d]");
  square->add_option("--iterations", sq_iters, "fixed iteration count");
  square->add_option("--count", sq_count, "iteration-count formula: general or square")->capture_default_str();
  auto* rect = app.add_subcommand("solve-rect", "spectral solver on [a,b] x [c,d]");
  add_solve_options(rect, rect_args, 1e-13);
  rect->add_option("--edges", rect_edges, "Dirichlet edge samples CSV");
  rect->add_option("--domain", rect_domain, "rectangle a,b,c,d for [a,b] x [c,d]")->required();
  rect->add_option("--iterations", rect_iters, "fixed iteration count");
  rect->add_option("--count", rect_count, "iteration-count formula: general or square")->capture_default_str();

  std::string fd_method = "adi", fd_count = "general";
  int fd_iters = 0;
  auto* fd = app.add_subcommand("solve-fd", "five-point finite-difference solver on [-1,1]^2");
  add_solve_options(fd, fd_args, 1e-10);
  fd->add_option("--method", fd_method, "adi or dst")->capture_default_str();
  fd->add_option("--iterations", fd_iters, "fixed iteration count");
  fd->add_option("--count", fd_count, "iteration-count formula: general or fd")->capture_default_str();

  auto* cyl = app.add_subcommand("solve-cylinder", "spectral solver on the unit cylinder");
  add_solve_options(cyl, cyl_args, 1e-10);

  int cube_max_n = 64;
  auto* cube = app.add_subcommand("solve-cube", "nested ADI solver on [-1,1]^3 (experimental)");
  add_solve_options(cube, cube_args, 1e-8);
  cube->add_option("--max-n", cube_max_n, "size guard")->capture_default_str();

  std::string b_solver = "square", b_out;
  int b_nmin = 64, b_nmax = 2048, b_reps = 3;
  double b_eps = 1e-8;
  auto* bench = app.add_subcommand("bench", "timings per pipeline stage over doubling n");
  bench->add_option("--solver", b_solver, "square, fd, cylinder or cube")->capture_default_str();
  bench->add_option("--nmin", b_nmin)->capture_default_str();
  bench->add_option("--nmax", b_nmax)->capture_default_str();
  bench->add_option("--eps", b_eps)->capture_default_str();
  bench->add_option("--reps", b_reps, "repetitions (median reported)")->capture_default_str();
  bench->add_option("--out", b_out, "output CSV (default: standard output)");

  int vb_n = 0;
  auto* verify = app.add_subcommand("verify-bounds", "certify the spectral interval of the square discretization");
  verify->add_option("--n", vb_n)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const int threads = resolve_thread_count(threads_flag);
    if (*shifts) return cmd_shifts(sa, sb, sc, sd, seps, siters, sout, out);
    if (*square) return cmd_square(sq_args, sq_edges, sq_domain, false, sq_iters, sq_count, out);
    if (*rect) return cmd_square(rect_args, rect_edges, rect_domain, true, rect_iters, rect_count, out);
    if (*fd) return cmd_fd(fd_args, fd_method, fd_iters, fd_count, out);
    if (*cyl) return cmd_cylinder(cyl_args, threads, out);
    if (*cube) return cmd_cube(cube_args, cube_max_n, out, err);
    if (*bench) return cmd_bench(b_solver, b_nmin, b_nmax, b_eps, b_reps, threads, b_out, out);
    if (*verify) return cmd_verify_bounds(vb_n, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("spectral-poisson");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace spoisson::cli
