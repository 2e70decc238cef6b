#include "wigdet/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "wigdet/errors.hpp"

namespace wigdet {

namespace {

// FNV-1a over the raw matrix bytes; identifies a failing input in error text.
std::uint64_t matrix_hash(const Eigen::MatrixXd& m) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const size_t len = sizeof(double) * static_cast<size_t>(m.size());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Spectrum eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "symmetric eigensolver did not converge (matrix hash %016llx)",
                  static_cast<unsigned long long>(matrix_hash(m)));
    throw numeric_error(buf);
  }
  Spectrum spec;
  spec.values = solver.eigenvalues().reverse();
  return spec;
}

Spectrum eigenvalues(const DataMatrix& m) { return eigenvalues(m.entries); }

double lss(const std::function<double(double)>& f, const Spectrum& spec) {
  double sum = 0.0;
  for (int i = 0; i < spec.size(); ++i) {
    const double v = f(spec.values(i));
    if (!std::isfinite(v)) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "f is non-finite at eigenvalue %.17g",
                    spec.values(i));
      throw domain_error(buf);
    }
    sum += v;
  }
  return sum;
}

EigenDecomposition eigen_decomposition(const DataMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.entries);
  if (solver.info() != Eigen::Success) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "symmetric eigensolver did not converge (matrix hash %016llx)",
                  static_cast<unsigned long long>(matrix_hash(m.entries)));
    throw numeric_error(buf);
  }
  EigenDecomposition dec;
  dec.spectrum.values = solver.eigenvalues().reverse();
  dec.vectors = solver.eigenvectors().rowwise().reverse();
  const Eigen::MatrixXd rebuilt =
      dec.vectors * dec.spectrum.values.asDiagonal() * dec.vectors.transpose();
  const double denom = m.entries.norm();
  dec.relative_residual =
      denom > 0.0 ? (m.entries - rebuilt).norm() / denom : (m.entries - rebuilt).norm();
  return dec;
}

}  // namespace wigdet
