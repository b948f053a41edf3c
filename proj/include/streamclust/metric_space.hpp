#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace streamclust {

// Finite set of points in R^dim. Items are identified by insertion index and
// never deduplicated; duplicate coordinates are legal.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::vector<std::vector<double>> points);

    void add(std::vector<double> point);

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<double>& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<std::vector<double>>& points() const { return points_; }

    double distance(std::size_t i, std::size_t j) const;

    static double euclidean(std::span<const double> a, std::span<const double> b);
    static double squared(std::span<const double> a, std::span<const double> b);

private:
    std::vector<std::vector<double>> points_;
    std::size_t dim_ = 0;
};

// Explicit n-by-n distance table. Construction zero-fills; set() writes both
// (i,j) and (j,i) so built tables stay symmetric, while raw() allows tests to
// plant asymmetric values for the validator.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}
    DistanceMatrix(std::size_t n, std::vector<double> entries);

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double value) {
        entries_[i * n_ + j] = value;
        entries_[j * n_ + i] = value;
    }
    double& raw(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

enum class Axiom { Symmetry, ZeroDiagonal, NonNegativity, Triangle };

struct AxiomViolation {
    Axiom axiom;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;  // used by Triangle only
    std::string describe() const;
};

// A finite distance space: point-backed (distances are L2 norms) or
// matrix-backed. Immutable after construction; safe to share across threads.
//
// Only symmetry and d(x,x)=0 are assumed of the distance. metric_claimed
// additionally asserts the triangle inequality, which validate_space then
// checks exhaustively.
class DistanceSpace {
public:
    explicit DistanceSpace(PointSet points)
        : backing_(std::move(points)), metric_claimed_(true) {}
    explicit DistanceSpace(DistanceMatrix matrix, bool metric_claimed = false)
        : backing_(std::move(matrix)), metric_claimed_(metric_claimed) {}

    std::size_t size() const;
    double distance(std::size_t i, std::size_t j) const;

    bool euclidean() const { return std::holds_alternative<PointSet>(backing_); }
    const PointSet& points() const;
    const DistanceMatrix& matrix() const;
    bool metric_claimed() const { return metric_claimed_; }

    // New space over the selected items, in the given order.
    DistanceSpace restrict_to(std::span<const std::size_t> items) const;

private:
    std::variant<PointSet, DistanceMatrix> backing_;
    bool metric_claimed_;
};

// Violations are data, not errors. At most one witness is reported per axiom
// (the first violating index tuple in scan order). The triangle check runs
// only when the space claims to be a metric.
std::vector<AxiomViolation> validate_space(const DistanceSpace& space,
                                           double triangle_tolerance = 1e-12);

enum class SpaceFormat { Coordinates, Matrix };

// Coordinate format: one point per line, comma-separated decimals, optional
// leading "# dim=<p>" header. Matrix format: a line with n, then n rows of n
// comma-separated decimals. Doubles are written in shortest round-trip form,
// so save followed by load reproduces every distance bit-exactly.
DistanceSpace load_space(const std::filesystem::path& path, SpaceFormat format);
void save_space(const DistanceSpace& space, const std::filesystem::path& path);
void save_space(const DistanceSpace& space, const std::filesystem::path& path,
                SpaceFormat format);

std::string format_double(double value);
double parse_double(const std::string& text, std::size_t line_number);

// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace streamclust
