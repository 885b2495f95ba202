#include "covertfas/port_geometry.hpp"

#include "covertfas/errors.hpp"
#include "covertfas/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace covertfas {

PortGrid::PortGrid(int n1, int n2, double aperture1, double aperture2)
    : n1_count(n1), n2_count(n2), w1(aperture1), w2(aperture2) {
    validate();
}

void PortGrid::validate() const {
    if (n1_count < 1 || n2_count < 1)
        throw DomainError("PortGrid: port counts must be >= 1");
    if (!(w1 >= 0.0) || !(w2 >= 0.0) || !std::isfinite(w1) || !std::isfinite(w2))
        throw DomainError("PortGrid: apertures must be finite and >= 0");
}

int map_to_linear(const PortGrid& grid, std::pair<int, int> coords) {
    const auto [n1, n2] = coords;
    if (n1 < 1 || n1 > grid.n1_count || n2 < 1 || n2 > grid.n2_count)
        throw DomainError("map_to_linear: coordinate (" + std::to_string(n1) + "," +
                          std::to_string(n2) + ") outside grid");
    return (n2 - 1) * grid.n1_count + n1;
}

std::pair<int, int> map_to_coords(const PortGrid& grid, int linear) {
    if (linear < 1 || linear > grid.size())
        throw DomainError("map_to_coords: index " + std::to_string(linear) + " outside [1, " +
                          std::to_string(grid.size()) + "]");
    const int zero_based = linear - 1;
    return {zero_based % grid.n1_count + 1, zero_based / grid.n1_count + 1};
}

PortIndex PortIndex::from_linear(const PortGrid& grid, int linear) {
    return PortIndex{linear, map_to_coords(grid, linear)};
}

PortIndex PortIndex::from_coords(const PortGrid& grid, std::pair<int, int> coords) {
    return PortIndex{map_to_linear(grid, coords), coords};
}

namespace {

double axis_offset(int delta, int count, double aperture) {
    if (count == 1) return 0.0;
    return static_cast<double>(delta) / static_cast<double>(count - 1) * aperture;
}

void check_index(const PortGrid& grid, const PortIndex& p) {
    if (map_to_linear(grid, p.coords) != p.linear)
        throw DomainError("PortIndex: linear index inconsistent with coordinates");
}

} // namespace

double port_distance(const PortGrid& grid, const PortIndex& a, const PortIndex& b) {
    check_index(grid, a);
    check_index(grid, b);
    const double d1 = axis_offset(a.coords.first - b.coords.first, grid.n1_count, grid.w1);
    const double d2 = axis_offset(a.coords.second - b.coords.second, grid.n2_count, grid.w2);
    return std::hypot(d1, d2);
}

double jakes_correlation(const PortGrid& grid, const PortIndex& a, const PortIndex& b,
                         BesselKernel kernel) {
    const double arg = 2.0 * std::numbers::pi * port_distance(grid, a, b);
    switch (kernel) {
    case BesselKernel::jakes_j0:
        return bessel_j0(arg);
    case BesselKernel::spherical_sinc:
        return sinc(arg);
    }
    return bessel_j0(arg);
}

Eigen::MatrixXd raw_correlation_matrix(const PortGrid& grid, BesselKernel kernel) {
    grid.validate();
    const int n = grid.size();
    Eigen::MatrixXd raw(n, n);
    for (int i = 0; i < n; ++i) {
        const auto a = PortIndex::from_linear(grid, i + 1);
        raw(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const auto b = PortIndex::from_linear(grid, j + 1);
            raw(i, j) = raw(j, i) = jakes_correlation(grid, a, b, kernel);
        }
    }
    return raw;
}

CorrelationMatrix build_correlation_matrix(const PortGrid& grid, BesselKernel kernel) {
    return CorrelationMatrix::repaired(raw_correlation_matrix(grid, kernel));
}

CorrelationMatrix CorrelationMatrix::identity(int dim) {
    if (dim < 1) throw DomainError("CorrelationMatrix: dim must be >= 1");
    return CorrelationMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

CorrelationMatrix CorrelationMatrix::repaired(const Eigen::MatrixXd& raw, double eig_floor) {
    if (raw.rows() < 1 || raw.rows() != raw.cols())
        throw DomainError("CorrelationMatrix: input must be square and non-empty");
    if (!raw.allFinite()) throw DomainError("CorrelationMatrix: non-finite entry");

    const Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    if (eig.info() != Eigen::Success)
        throw NumericalError("CorrelationMatrix: eigen-decomposition failed");

    Eigen::MatrixXd m = sym;
    if (eig.eigenvalues().minCoeff() < eig_floor) {
        const Eigen::VectorXd floored = eig.eigenvalues().cwiseMax(eig_floor);
        m = eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose();
    }
    const Eigen::VectorXd inv_sd = m.diagonal().cwiseSqrt().cwiseInverse();
    m = inv_sd.asDiagonal() * m * inv_sd.asDiagonal();
    m = (0.5 * (m + m.transpose())).eval();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, i) = 1.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = std::clamp(m(i, j), -1.0, 1.0);
    }
    return CorrelationMatrix(std::move(m));
}

CorrelationMatrix CorrelationMatrix::permuted(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != dim())
        throw DomainError("CorrelationMatrix::permuted: permutation size mismatch");
    Eigen::MatrixXd p(dim(), dim());
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) p(i, j) = m_(perm[i], perm[j]);
    return CorrelationMatrix(std::move(p));
}

} // namespace covertfas
