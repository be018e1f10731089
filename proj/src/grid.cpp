#include "csim/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "csim/errors.hpp"
#include "csim/io.hpp"

namespace csim {

GridSet::GridSet(double r, std::size_t resolution) : r_(r), n_(resolution), bits_(resolution * resolution, 0) {
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorKind::InvalidArgument, "window radius must be positive");
    if (resolution < 2) fail(ErrorKind::InvalidArgument, "resolution must be at least 2");
}

std::complex<double> GridSet::center(std::size_t i, std::size_t j) const noexcept {
    const double h = cell_size();
    return {-r_ + (static_cast<double>(i) + 0.5) * h, -r_ + (static_cast<double>(j) + 0.5) * h};
}

std::size_t GridSet::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

GridSet from_predicate(double r, std::size_t resolution,
                       const std::function<bool(std::complex<double>)>& member) {
    GridSet out(r, resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
        for (std::size_t i = 0; i < resolution; ++i) {
            if (member(out.center(i, j))) out.set(i, j, true);
        }
    }
    return out;
}

bool cell_meets_circle(const GridSet& s, std::size_t i, std::size_t j) {
    const double h = s.cell_size();
    const auto c = s.center(i, j);
    const double x0 = c.real() - 0.5 * h;
    const double x1 = c.real() + 0.5 * h;
    const double y0 = c.imag() - 0.5 * h;
    const double y1 = c.imag() + 0.5 * h;
    const double nx = std::clamp(0.0, x0, x1);
    const double ny = std::clamp(0.0, y0, y1);
    const double fx = std::max(std::abs(x0), std::abs(x1));
    const double fy = std::max(std::abs(y0), std::abs(y1));
    const double r2 = s.r() * s.r();
    return nx * nx + ny * ny <= r2 && r2 <= fx * fx + fy * fy;
}

GridSet truncate_window(const GridSet& s) {
    GridSet out(s.r(), s.resolution());
    const double r2 = s.r() * s.r();
    for (std::size_t j = 0; j < s.resolution(); ++j) {
        for (std::size_t i = 0; i < s.resolution(); ++i) {
            const bool inside = s.get(i, j) && std::norm(s.center(i, j)) <= r2;
            out.set(i, j, inside || cell_meets_circle(s, i, j));
        }
    }
    return out;
}

namespace {

constexpr double kFar = 1e20;

// Lower envelope of parabolas (q - k)^2 + f[k]: d[q] = min_k that value.
void transform_line(const double* f, double* d, std::size_t n, std::vector<std::size_t>& v,
                    std::vector<double>& z) {
    auto intersection = [f](std::size_t q, std::size_t p) {
        const double dq = double(q);
        const double dp = double(p);
        return ((f[q] + dq * dq) - (f[p] + dp * dp)) / (2.0 * dq - 2.0 * dp);
    };
    std::size_t k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (std::size_t q = 1; q < n; ++q) {
        double s = intersection(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = intersection(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[k + 1] < double(q)) ++k;
        const double dq = double(q) - double(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::vector<double> squared_distance_transform(const GridSet& s) {
    const std::size_t n = s.resolution();
    std::vector<double> grid(n * n);
    for (std::size_t idx = 0; idx < n * n; ++idx) grid[idx] = s.bits()[idx] ? 0.0 : kFar;

    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<std::size_t> v(n);
    // Along i (within a row of fixed j).
    for (std::size_t j = 0; j < n; ++j) {
        double* row = grid.data() + j * n;
        std::copy(row, row + n, f.begin());
        transform_line(f.data(), d.data(), n, v, z);
        std::copy(d.begin(), d.end(), row);
    }
    // Along j.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) f[j] = grid[j * n + i];
        transform_line(f.data(), d.data(), n, v, z);
        for (std::size_t j = 0; j < n; ++j) grid[j * n + i] = d[j];
    }
    return grid;
}

namespace {

void require_compatible(const GridSet& a, const GridSet& b) {
    if (a.r() != b.r() || a.resolution() != b.resolution()) {
        fail(ErrorKind::InvalidArgument, "grid sets have different windows or resolutions");
    }
}

double directed_squared(const GridSet& a, const std::vector<double>& dist_b) {
    double worst = 0.0;
    const auto& bits = a.bits();
    for (std::size_t idx = 0; idx < bits.size(); ++idx) {
        if (bits[idx]) worst = std::max(worst, dist_b[idx]);
    }
    return worst;
}

}  // namespace

double directed_hausdorff(const GridSet& a, const GridSet& b) {
    require_compatible(a, b);
    if (a.empty() || b.empty()) fail(ErrorKind::EmptySet, "Hausdorff distance needs non-empty sets");
    return std::sqrt(directed_squared(a, squared_distance_transform(b))) * a.cell_size();
}

double hausdorff_distance(const GridSet& a, const GridSet& b) {
    require_compatible(a, b);
    if (a.empty() || b.empty()) fail(ErrorKind::EmptySet, "Hausdorff distance needs non-empty sets");
    const double ab = directed_squared(a, squared_distance_transform(b));
    const double ba = directed_squared(b, squared_distance_transform(a));
    return std::sqrt(std::max(ab, ba)) * a.cell_size();
}

std::vector<double> convergence_report(const std::vector<GridSet>& seq, const GridSet& target) {
    std::vector<double> out;
    out.reserve(seq.size());
    for (const auto& s : seq) out.push_back(hausdorff_distance(s, target));
    return out;
}

std::string to_pgm(const GridSet& s) {
    const std::size_t n = s.resolution();
    std::string out = "P5\n# r=" + format_double(s.r()) + "\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + n * n);
    for (std::size_t row = 0; row < n; ++row) {
        const std::size_t j = n - 1 - row;
        for (std::size_t i = 0; i < n; ++i) {
            out[header + row * n + i] = static_cast<char>(s.get(i, j) ? 0 : 255);
        }
    }
    return out;
}

GridSet from_pgm(const std::string& bytes) {
    std::size_t pos = 0;
    double r = 0.0;
    auto skip_space_and_comments = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                const std::size_t eol = bytes.find('\n', pos);
                const std::string comment = bytes.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
                if (comment.rfind("# r=", 0) == 0) r = std::stod(comment.substr(4));
                pos = eol == std::string::npos ? bytes.size() : eol + 1;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() {
        skip_space_and_comments();
        std::size_t value = 0;
        const auto res = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
        if (res.ec != std::errc{}) fail(ErrorKind::Io, "malformed PGM header");
        pos = static_cast<std::size_t>(res.ptr - bytes.data());
        return value;
    };
    if (bytes.rfind("P5", 0) != 0) fail(ErrorKind::Io, "not a binary PGM");
    pos = 2;
    const std::size_t width = read_int();
    const std::size_t height = read_int();
    const std::size_t maxval = read_int();
    if (width != height || maxval != 255) fail(ErrorKind::Io, "expected a square PGM with maxval 255");
    ++pos;  // single whitespace byte before the raster
    if (!(r > 0.0)) fail(ErrorKind::Io, "PGM lacks the '# r=' window comment");
    if (bytes.size() - pos != width * height) fail(ErrorKind::Io, "PGM raster size mismatch");
    GridSet out(r, width);
    for (std::size_t row = 0; row < height; ++row) {
        for (std::size_t i = 0; i < width; ++i) {
            const auto byte = static_cast<unsigned char>(bytes[pos + row * width + i]);
            if (byte != 0 && byte != 255) fail(ErrorKind::Io, "PGM raster is not bilevel");
            out.set(i, height - 1 - row, byte == 0);
        }
    }
    return out;
}

}  // namespace csim
