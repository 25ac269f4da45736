#pragma once

#include <complex>
#include <iosfwd>

#include "streamkoop/model.hpp"
#include "streamkoop/numlin.hpp"

namespace streamkoop {

/// eig(model.matrix()) in the library's deterministic order.
EigenDecomposition spectrum(const KoopmanModel& model);

struct GridSpec {
  double x1_min = -3.0;
  double x1_max = 3.0;
  Index x1_count = 100;
  double x2_min = -3.0;
  double x2_max = 3.0;
  Index x2_count = 100;

  Vector x1_axis() const;
  Vector x2_axis() const;
};

/// Koopman eigenfunction sampled on a 2-D grid; values(r, c) is the value at
/// (grid_x1(c), grid_x2(r)).
struct EigenfunctionField {
  Vector grid_x1;
  Vector grid_x2;
  ComplexMatrix values;
  std::complex<double> eigenvalue;
};

/// Evaluates phi_j(x) = w_j^H lift(x) for each column of `states`, where w_j
/// is the j-th left eigenvector of K. With K lift(x) ~ lift(T x), this gives
/// phi_j(T x) ~ lambda_j phi_j(x).
ComplexVector eigenfunction_values(const KoopmanModel& model, const EigenDecomposition& eigs,
                                   Index which, const Matrix& states);

EigenfunctionField eigenfunction_on_grid(const KoopmanModel& model, Index which,
                                         const GridSpec& grid);

/// CSV with header `re,im,abs`, one eigenvalue per row.
void write_spectrum_csv(std::ostream& out, const EigenDecomposition& eigs);

/// CSV with header `x1,x2,re,im,abs`, x1 varying fastest.
void write_field_csv(std::ostream& out, const EigenfunctionField& field);

}  // namespace streamkoop
