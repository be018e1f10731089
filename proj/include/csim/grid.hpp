#pragma once

// Bitmap model of compact planar sets over the square window [-r, r]^2, the
// [A]_r window operator and the Hausdorff distance between such sets.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace csim {

/// Cell (i, j) covers the square centred at (-r + (i + 1/2) h, -r + (j + 1/2) h)
/// with h = 2r / resolution; i runs along the real axis, j along the imaginary.
class GridSet {
public:
    GridSet(double r, std::size_t resolution);

    double r() const noexcept { return r_; }
    std::size_t resolution() const noexcept { return n_; }
    double cell_size() const noexcept { return 2.0 * r_ / static_cast<double>(n_); }

    std::complex<double> center(std::size_t i, std::size_t j) const noexcept;

    bool get(std::size_t i, std::size_t j) const noexcept { return bits_[j * n_ + i] != 0; }
    void set(std::size_t i, std::size_t j, bool value) noexcept { bits_[j * n_ + i] = value ? 1 : 0; }

    std::size_t count() const noexcept;
    bool empty() const noexcept { return count() == 0; }

    /// Row-major by j (imaginary index), one byte per cell.
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const GridSet&, const GridSet&) = default;

private:
    double r_;
    std::size_t n_;
    std::vector<std::uint8_t> bits_;
};

GridSet from_predicate(double r, std::size_t resolution,
                       const std::function<bool(std::complex<double>)>& member);

/// [A]_r: keeps cells whose centre lies in the closed disk |z| <= r and adds
/// every cell whose square meets the circle |z| = r.
GridSet truncate_window(const GridSet& s);

/// True iff the square of cell (i, j) meets the circle |z| = r.
bool cell_meets_circle(const GridSet& s, std::size_t i, std::size_t j);

/// Squared distance, in cells, from every cell to the nearest set cell;
/// computed exactly with two passes of the lower-envelope transform.
std::vector<double> squared_distance_transform(const GridSet& s);

/// sup over cells of A of the distance to B, in window units.
double directed_hausdorff(const GridSet& a, const GridSet& b);

/// Euclidean Hausdorff distance between the cell-centre sets of a and b.
/// Throws InvalidArgument for incompatible grids and EmptySet if either is empty.
double hausdorff_distance(const GridSet& a, const GridSet& b);

std::vector<double> convergence_report(const std::vector<GridSet>& seq, const GridSet& target);

/// Binary PGM (P5, maxval 255): members black (0), others white (255), row 0
/// at the top (largest imaginary part). The window radius rides along as a
/// "# r=" comment line.
std::string to_pgm(const GridSet& s);
GridSet from_pgm(const std::string& bytes);

}  // namespace csim
