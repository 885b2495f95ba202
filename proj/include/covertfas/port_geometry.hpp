#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace covertfas {

/// Planar fluid-antenna port grid. Apertures are measured in wavelengths.
struct PortGrid {
    int n1_count = 1;
    int n2_count = 1;
    double w1 = 0.0;
    double w2 = 0.0;

    PortGrid() = default;
    PortGrid(int n1, int n2, double aperture1, double aperture2);

    [[nodiscard]] int size() const noexcept { return n1_count * n2_count; }
    void validate() const;
};

/// 1-based port position, carried both as linear index and grid coordinates.
struct PortIndex {
    int linear = 1;
    std::pair<int, int> coords{1, 1};

    static PortIndex from_linear(const PortGrid& grid, int linear);
    static PortIndex from_coords(const PortGrid& grid, std::pair<int, int> coords);
};

enum class BesselKernel {
    jakes_j0,       // J0(2 pi d)
    spherical_sinc, // sin(2 pi d) / (2 pi d)
};

/// Symmetric, unit-diagonal correlation matrix that has been repaired to be
/// positive semidefinite. Construct through build_correlation_matrix() or
/// CorrelationMatrix::repaired().
class CorrelationMatrix {
public:
    CorrelationMatrix() : m_(Eigen::MatrixXd::Identity(1, 1)) {}

    /// Symmetrize, floor eigenvalues at `eig_floor`, rescale to unit diagonal.
    static CorrelationMatrix repaired(const Eigen::MatrixXd& raw, double eig_floor = 1e-10);
    static CorrelationMatrix identity(int dim);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(m_.rows()); }
    [[nodiscard]] double operator()(int i, int j) const { return m_(i, j); }
    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    /// Rows/columns reordered so that result(i,j) = this(perm[i], perm[j]).
    [[nodiscard]] CorrelationMatrix permuted(const std::vector<int>& perm) const;

private:
    explicit CorrelationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}
    Eigen::MatrixXd m_;
};

// Row-major: linear = (n2 - 1) * N1 + n1.
int map_to_linear(const PortGrid& grid, std::pair<int, int> coords);
std::pair<int, int> map_to_coords(const PortGrid& grid, int linear);

/// Normalized planar distance between two ports, in wavelengths. An axis with a
/// single port contributes no displacement.
double port_distance(const PortGrid& grid, const PortIndex& a, const PortIndex& b);

double jakes_correlation(const PortGrid& grid, const PortIndex& a, const PortIndex& b,
                         BesselKernel kernel = BesselKernel::jakes_j0);

/// Raw pairwise kernel matrix, before PSD repair.
Eigen::MatrixXd raw_correlation_matrix(const PortGrid& grid,
                                       BesselKernel kernel = BesselKernel::jakes_j0);

CorrelationMatrix build_correlation_matrix(const PortGrid& grid,
                                           BesselKernel kernel = BesselKernel::jakes_j0);

} // namespace covertfas
