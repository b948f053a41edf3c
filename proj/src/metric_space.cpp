#include "streamclust/metric_space.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace streamclust {

PointSet::PointSet(std::vector<std::vector<double>> points) {
    for (auto& p : points) add(std::move(p));
}

void PointSet::add(std::vector<double> point) {
    if (points_.empty()) {
        dim_ = point.size();
        if (dim_ == 0) throw std::invalid_argument("point dimension must be positive");
    } else if (point.size() != dim_) {
        throw std::invalid_argument("point dimension mismatch: expected " +
                                    std::to_string(dim_) + ", got " +
                                    std::to_string(point.size()));
    }
    for (double c : point) {
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
    }
    points_.push_back(std::move(point));
}

double PointSet::euclidean(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared(a, b));
}

double PointSet::squared(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double PointSet::distance(std::size_t i, std::size_t j) const {
    return euclidean(points_[i], points_[j]);
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
    if (entries_.size() != n * n) {
        throw std::invalid_argument("distance matrix needs n*n entries");
    }
}

std::size_t DistanceSpace::size() const {
    if (euclidean()) return std::get<PointSet>(backing_).size();
    return std::get<DistanceMatrix>(backing_).size();
}

double DistanceSpace::distance(std::size_t i, std::size_t j) const {
    const std::size_t n = size();
    if (i >= n || j >= n) {
        throw std::out_of_range("item index " + std::to_string(i >= n ? i : j) +
                                " out of range for space of size " + std::to_string(n));
    }
    if (euclidean()) return std::get<PointSet>(backing_).distance(i, j);
    return std::get<DistanceMatrix>(backing_).at(i, j);
}

const PointSet& DistanceSpace::points() const {
    if (!euclidean()) throw std::logic_error("space is not point-backed");
    return std::get<PointSet>(backing_);
}

const DistanceMatrix& DistanceSpace::matrix() const {
    if (euclidean()) throw std::logic_error("space is not matrix-backed");
    return std::get<DistanceMatrix>(backing_);
}

DistanceSpace DistanceSpace::restrict_to(std::span<const std::size_t> items) const {
    if (euclidean()) {
        PointSet sub;
        for (std::size_t item : items) sub.add(points()[item]);
        return DistanceSpace(std::move(sub));
    }
    DistanceMatrix sub(items.size());
    for (std::size_t a = 0; a < items.size(); ++a) {
        for (std::size_t b = a + 1; b < items.size(); ++b) {
            sub.set(a, b, matrix().at(items[a], items[b]));
        }
    }
    return DistanceSpace(std::move(sub), metric_claimed_);
}

std::string AxiomViolation::describe() const {
    switch (axiom) {
        case Axiom::Symmetry:
            return "symmetry violated at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        case Axiom::ZeroDiagonal:
            return "nonzero diagonal at (" + std::to_string(i) + "," + std::to_string(i) + ")";
        case Axiom::NonNegativity:
            return "negative distance at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        case Axiom::Triangle:
            return "triangle inequality violated at (" + std::to_string(i) + "," +
                   std::to_string(j) + "," + std::to_string(k) + ")";
    }
    return "unknown axiom";
}

std::vector<AxiomViolation> validate_space(const DistanceSpace& space,
                                           double triangle_tolerance) {
    std::vector<AxiomViolation> report;
    const std::size_t n = space.size();

    // Point backings satisfy symmetry/diagonal/non-negativity by construction,
    // but the exhaustive scan is cheap at desk scale and keeps one code path.
    bool found_symmetry = false, found_diagonal = false, found_negative = false;
    for (std::size_t i = 0; i < n && !(found_symmetry && found_diagonal && found_negative);
         ++i) {
        if (!found_diagonal && space.distance(i, i) != 0.0) {
            report.push_back({Axiom::ZeroDiagonal, i, i, 0});
            found_diagonal = true;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!found_negative && space.distance(i, j) < 0.0) {
                report.push_back({Axiom::NonNegativity, i, j, 0});
                found_negative = true;
            }
            if (!found_symmetry && j > i &&
                space.distance(i, j) != space.distance(j, i)) {
                report.push_back({Axiom::Symmetry, i, j, 0});
                found_symmetry = true;
            }
        }
    }

    if (space.metric_claimed()) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double dij = space.distance(i, j);
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    if (space.distance(i, k) > dij + space.distance(j, k) + triangle_tolerance) {
                        report.push_back({Axiom::Triangle, i, j, k});
                        return report;
                    }
                }
            }
        }
    }
    return report;
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf, end);
}

double parse_double(const std::string& text, std::size_t line_number) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    std::size_t last = text.find_last_not_of(" \t\r");
    if (begin == std::string::npos) {
        throw std::runtime_error("line " + std::to_string(line_number) + ": empty field");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data() + begin, text.data() + last + 1, value);
    if (ec != std::errc{} || ptr != text.data() + last + 1) {
        throw std::runtime_error("line " + std::to_string(line_number) +
                                 ": cannot parse number '" + text + "'");
    }
    return value;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

DistanceSpace load_coordinates(std::istream& in, const std::string& name) {
    PointSet points;
    std::optional<std::size_t> declared_dim;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line)) continue;
        if (line[0] == '#') {
            const auto pos = line.find("dim=");
            if (pos != std::string::npos) {
                declared_dim = static_cast<std::size_t>(
                    parse_double(line.substr(pos + 4), line_number));
            }
            continue;
        }
        std::vector<double> point;
        for (const auto& field : split_commas(line)) {
            point.push_back(parse_double(field, line_number));
        }
        if (declared_dim && point.size() != *declared_dim) {
            throw std::runtime_error(name + ": line " + std::to_string(line_number) +
                                     ": dimension mismatch: header says " +
                                     std::to_string(*declared_dim) + ", row has " +
                                     std::to_string(point.size()));
        }
        try {
            points.add(std::move(point));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(name + ": line " + std::to_string(line_number) + ": " +
                                     e.what());
        }
    }
    if (points.size() == 0) throw std::runtime_error(name + ": no items");
    return DistanceSpace(std::move(points));
}

DistanceSpace load_matrix(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t line_number = 0;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line) || line[0] == '#') continue;
        const double header = parse_double(line, line_number);
        if (header < 1 || header != std::floor(header)) {
            throw std::runtime_error(name + ": line " + std::to_string(line_number) +
                                     ": invalid item count");
        }
        n = static_cast<std::size_t>(header);
        break;
    }
    if (n == 0) throw std::runtime_error(name + ": no items");

    DistanceMatrix matrix(n);
    std::size_t row = 0;
    while (row < n && std::getline(in, line)) {
        ++line_number;
        if (blank(line) || line[0] == '#') continue;
        const auto fields = split_commas(line);
        if (fields.size() != n) {
            throw std::runtime_error(name + ": line " + std::to_string(line_number) +
                                     ": row " + std::to_string(row) + " has " +
                                     std::to_string(fields.size()) + " entries, expected " +
                                     std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            matrix.raw(row, j) = parse_double(fields[j], line_number);
        }
        ++row;
    }
    if (row != n) {
        throw std::runtime_error(name + ": expected " + std::to_string(n) +
                                 " matrix rows, found " + std::to_string(row));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (matrix.at(i, j) != matrix.at(j, i)) {
                throw std::runtime_error(name + ": asymmetric matrix at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return DistanceSpace(std::move(matrix));
}

}  // namespace

DistanceSpace load_space(const std::filesystem::path& path, SpaceFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return format == SpaceFormat::Coordinates ? load_coordinates(in, path.string())
                                              : load_matrix(in, path.string());
}

void save_space(const DistanceSpace& space, const std::filesystem::path& path) {
    save_space(space, path,
               space.euclidean() ? SpaceFormat::Coordinates : SpaceFormat::Matrix);
}

void save_space(const DistanceSpace& space, const std::filesystem::path& path,
                SpaceFormat format) {
    std::ostringstream out;
    if (format == SpaceFormat::Coordinates) {
        const PointSet& ps = space.points();
        out << "# dim=" << ps.dim() << "\n";
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t c = 0; c < ps.dim(); ++c) {
                if (c) out << ",";
                out << format_double(ps[i][c]);
            }
            out << "\n";
        }
    } else {
        const std::size_t n = space.size();
        out << n << "\n";
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j) out << ",";
                out << format_double(space.distance(i, j));
            }
            out << "\n";
        }
    }
    write_file_atomic(path, out.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace streamclust
