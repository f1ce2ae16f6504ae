#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "spectral_poisson/basis.hpp"
#include "spectral_poisson/poisson_cube.hpp"
#include "spectral_poisson/poisson_cylinder.hpp"
#include "spectral_poisson/poisson_fd.hpp"
#include "spectral_poisson/poisson_square.hpp"
#include "spectral_poisson/report.hpp"

namespace spoisson::io {

/// A CSV table with a single "# key=value, key=value" header line.
struct CsvFile {
  std::vector<std::pair<std::string, std::string>> header;
  Eigen::MatrixXd values;

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;  // throws PreconditionError when absent
  int get_int(const std::string& key) const;
  // Throws unless every header key is in `allowed`.
  void require_keys(const std::vector<std::string>& allowed) const;
};

CsvFile parse_csv(const std::string& text);
std::string format_csv(const CsvFile& f);  // 17 significant digits
CsvFile read_csv(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Square/rectangle right-hand side: samples on the Chebyshev grid
/// ("# grid_x=chebyshev, grid_y=chebyshev, n=N", rows y) or coefficients
/// ("# basis_x=<tag>, basis_y=<tag>, n=N"). Returned as Chebyshev coefficients.
CoeffMatrix2D load_square_rhs(const CsvFile& f);
// "# edges=chebyshev, n=N": N rows of left, right, bottom, top samples at ascending Chebyshev points.
EdgeData load_edges(const CsvFile& f);
// "# grid_x=uniform, grid_y=uniform, n=N": (N-1) x (N-1) interior values, rows y.
FDProblem load_fd_rhs(const CsvFile& f);

/// Cylinder input: half-grid samples ("# grid_r=chebyshev_half, grid_theta=uniform,
/// grid_z=chebyshev, n=N", row i_r * N + i_theta, columns z) or mode coefficients in the
/// format written by cylinder_output.
struct CylinderInput {
  bool is_coeffs = false;
  CylinderSamples samples;
  std::vector<Eigen::MatrixXcd> modes;
};
CylinderInput load_cylinder_rhs(const CsvFile& f);

// Cube samples ("# grid_x=chebyshev, grid_y=chebyshev, grid_z=chebyshev, n=N") or Chebyshev
// coefficients ("# basis_x=chebyshev, ..."); rows i + N j, columns k. Returns coefficients.
Eigen::MatrixXd load_cube_rhs(const CsvFile& f);

CsvFile square_output(const CoeffMatrix2D& cheb);
CsvFile fd_output(int n, const Eigen::MatrixXd& X);
// Chebyshev(r) x Fourier(theta) x Chebyshev(z) coefficients of the doubled solution, padded to
// m = n + 4 in every direction: row t * m + i (mode k = t - m/2, r index i), m real then m imaginary columns.
CsvFile cylinder_output(const CylinderSolution& sol);
CsvFile cube_output(const CubeSolution& sol);

// {solver, n, eps, iterations, residual, seconds: {stage: s}, warnings: [...]}
std::string report_json(const SolveReport& r);

}  // namespace spoisson::io
