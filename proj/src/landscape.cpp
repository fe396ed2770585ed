#include "serf/landscape.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace serf {

NetworkSpec landscape_network_spec(ActivationTag tag, std::uint64_t seed, std::size_t depth,
                                   std::size_t width) {
    NetworkSpec spec;
    spec.input_dim = 2;
    spec.output_dim = 1;
    spec.seed = seed;
    spec.initializer = make_initializer(InitTag::glorot_normal);
    for (std::size_t i = 0; i < depth; ++i) {
        LayerSpec l;
        l.width = width;
        l.activation = make_activation(tag);
        spec.layers.push_back(l);
    }
    return spec;
}

ScalarField landscape_render(const NetworkSpec& spec, const GridSpec& grid) {
    if (spec.input_dim != 2 || spec.output_dim != 1) {
        throw std::invalid_argument("landscape needs a 2-input 1-output network, got " +
                                    std::to_string(spec.input_dim) + " inputs and " +
                                    std::to_string(spec.output_dim) + " outputs");
    }
    if (grid.res_x < 2 || grid.res_y < 2) {
        throw std::invalid_argument("grid resolution must be at least 2x2");
    }
    if (!(std::isfinite(grid.x_lo) && std::isfinite(grid.x_hi) && std::isfinite(grid.y_lo) &&
          std::isfinite(grid.y_hi)) ||
        !(grid.x_lo < grid.x_hi) || !(grid.y_lo < grid.y_hi)) {
        throw std::invalid_argument("grid bounds must be finite with lo < hi");
    }

    Network net(spec);
    const double dx = (grid.x_hi - grid.x_lo) / static_cast<double>(grid.res_x - 1);
    const double dy = (grid.y_hi - grid.y_lo) / static_cast<double>(grid.res_y - 1);

    Tensor2 points(grid.res_x * grid.res_y, 2);
    for (std::size_t i = 0; i < grid.res_y; ++i) {
        const double y = grid.y_lo + static_cast<double>(i) * dy;
        for (std::size_t j = 0; j < grid.res_x; ++j) {
            const std::size_t r = i * grid.res_x + j;
            points(r, 0) = grid.x_lo + static_cast<double>(j) * dx;
            points(r, 1) = y;
        }
    }
    Rng unused(0);
    const Tensor2 out = net.forward(points, Mode::eval, unused);

    ScalarField field;
    field.grid = grid;
    field.values = Tensor2(grid.res_y, grid.res_x);
    for (std::size_t i = 0; i < grid.res_y; ++i)
        for (std::size_t j = 0; j < grid.res_x; ++j)
            field.values(i, j) = out(i * grid.res_x + j, 0);
    return field;
}

double mean_abs_laplacian(const ScalarField& field) {
    const Tensor2& v = field.values;
    if (v.rows() < 3 || v.cols() < 3) return 0.0;
    const double dx =
        (field.grid.x_hi - field.grid.x_lo) / static_cast<double>(field.grid.res_x - 1);
    const double dy =
        (field.grid.y_hi - field.grid.y_lo) / static_cast<double>(field.grid.res_y - 1);
    const double wx = 1.0 / (dx * dx);
    const double wy = 1.0 / (dy * dy);
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < v.rows(); ++i) {
        for (std::size_t j = 1; j + 1 < v.cols(); ++j) {
            const double lap = (v(i, j - 1) - 2.0 * v(i, j) + v(i, j + 1)) * wx +
                               (v(i - 1, j) - 2.0 * v(i, j) + v(i + 1, j)) * wy;
            sum += std::fabs(lap);
        }
    }
    const double count = static_cast<double>((v.rows() - 2) * (v.cols() - 2));
    return sum / count;
}

void write_pgm16(const ScalarField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const Tensor2& v = field.values;
    double lo = v.data()[0];
    double hi = v.data()[0];
    for (std::size_t k = 0; k < v.size(); ++k) {
        lo = std::min(lo, v.data()[k]);
        hi = std::max(hi, v.data()[k]);
    }
    out << "P5\n" << v.cols() << " " << v.rows() << "\n65535\n";
    const double span = hi - lo;
    std::vector<unsigned char> row(v.cols() * 2);
    for (std::size_t i = 0; i < v.rows(); ++i) {
        for (std::size_t j = 0; j < v.cols(); ++j) {
            unsigned int g = 0;
            if (span > 0.0) {
                const double t = (v(i, j) - lo) / span;
                g = static_cast<unsigned int>(std::lround(t * 65535.0));
                if (g > 65535u) g = 65535u;
            }
            row[2 * j] = static_cast<unsigned char>(g >> 8);
            row[2 * j + 1] = static_cast<unsigned char>(g & 0xFF);
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

void write_field_csv(const ScalarField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "x,y,value\n";
    const double dx =
        (field.grid.x_hi - field.grid.x_lo) / static_cast<double>(field.grid.res_x - 1);
    const double dy =
        (field.grid.y_hi - field.grid.y_lo) / static_cast<double>(field.grid.res_y - 1);
    char buf[96];
    for (std::size_t i = 0; i < field.values.rows(); ++i) {
        const double y = field.grid.y_lo + static_cast<double>(i) * dy;
        for (std::size_t j = 0; j < field.values.cols(); ++j) {
            const double x = field.grid.x_lo + static_cast<double>(j) * dx;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, y, field.values(i, j));
            out << buf;
        }
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace serf
