#include "streamkoop/spectral.hpp"

#include <ostream>
#include <string>

#include "streamkoop/csv.hpp"
#include "streamkoop/errors.hpp"

namespace streamkoop {

namespace {

Vector axis(double lo, double hi, Index count) {
  if (count < 1) throw ContractError("grid: axis needs at least one point");
  if (count == 1) return Vector::Constant(1, lo);
  return Vector::LinSpaced(count, lo, hi);
}

}  // namespace

Vector GridSpec::x1_axis() const { return axis(x1_min, x1_max, x1_count); }
Vector GridSpec::x2_axis() const { return axis(x2_min, x2_max, x2_count); }

EigenDecomposition spectrum(const KoopmanModel& model) { return eig(model.matrix()); }

ComplexVector eigenfunction_values(const KoopmanModel& model, const EigenDecomposition& eigs,
                                   Index which, const Matrix& states) {
  if (which < 0 || which >= eigs.size()) {
    throw ContractError("eigenfunction index " + std::to_string(which) + " out of range 0.." +
                        std::to_string(eigs.size() - 1));
  }
  const Matrix lifted = model.dictionary().lift_batch(states);
  // w^H Psi for every column.
  return (eigs.left.col(which).adjoint() * lifted.cast<std::complex<double>>()).transpose();
}

EigenfunctionField eigenfunction_on_grid(const KoopmanModel& model, Index which,
                                         const GridSpec& grid) {
  if (model.dictionary().state_dim() != 2) {
    throw ContractError("eigenfunction_on_grid: requires a two-dimensional state space");
  }
  if (which < 0 || which >= model.feature_dim()) {
    throw ContractError("eigenfunction index " + std::to_string(which) + " out of range 0.." +
                        std::to_string(model.feature_dim() - 1));
  }
  const EigenDecomposition eigs = spectrum(model);

  EigenfunctionField field;
  field.grid_x1 = grid.x1_axis();
  field.grid_x2 = grid.x2_axis();
  field.eigenvalue = eigs.eigenvalues(which);

  const Index n1 = field.grid_x1.size();
  const Index n2 = field.grid_x2.size();
  Matrix points(2, n1 * n2);
  for (Index r = 0; r < n2; ++r) {
    for (Index c = 0; c < n1; ++c) {
      points(0, r * n1 + c) = field.grid_x1(c);
      points(1, r * n1 + c) = field.grid_x2(r);
    }
  }
  const ComplexVector flat = eigenfunction_values(model, eigs, which, points);
  field.values.resize(n2, n1);
  for (Index r = 0; r < n2; ++r) {
    for (Index c = 0; c < n1; ++c) field.values(r, c) = flat(r * n1 + c);
  }
  return field;
}

void write_spectrum_csv(std::ostream& out, const EigenDecomposition& eigs) {
  out << "re,im,abs\n";
  for (Index j = 0; j < eigs.size(); ++j) {
    const auto lambda = eigs.eigenvalues(j);
    out << format_double(lambda.real()) << ',' << format_double(lambda.imag()) << ','
        << format_double(std::abs(lambda)) << '\n';
  }
}

void write_field_csv(std::ostream& out, const EigenfunctionField& field) {
  out << "x1,x2,re,im,abs\n";
  for (Index r = 0; r < field.values.rows(); ++r) {
    for (Index c = 0; c < field.values.cols(); ++c) {
      const auto v = field.values(r, c);
      out << format_double(field.grid_x1(c)) << ',' << format_double(field.grid_x2(r)) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << ','
          << format_double(std::abs(v)) << '\n';
    }
  }
}

}  // namespace streamkoop
