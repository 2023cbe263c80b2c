#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qi {

/// The three skew-symmetric bivariate kernels usable for g (entry times)
/// and h (exit times).
enum class KernelKind { Sign, Linear, Rank };

struct KernelSpec {
    KernelKind kind = KernelKind::Sign;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

inline constexpr KernelSpec kSign{KernelKind::Sign};
inline constexpr KernelSpec kLinear{KernelKind::Linear};
inline constexpr KernelSpec kRank{KernelKind::Rank};

std::string_view to_string(KernelKind kind);

/// Case-insensitive "sign" / "linear" / "rank".
std::optional<KernelSpec> parse_kernel(std::string_view name);

/// sign(s - t), with sign(0) = 0.
inline double eval_sign(double s, double t) {
    return static_cast<double>((s > t) - (s < t));
}

inline double eval_linear(double s, double t) { return s - t; }

enum class TiePolicy { Midrank };

/// Midranks divided by n, one entry per input value.
struct RankVector {
    std::vector<double> ranks;
    TiePolicy tie_policy = TiePolicy::Midrank;

    std::size_t size() const { return ranks.size(); }
    double operator[](std::size_t i) const { return ranks[i]; }
};

/// Requires a non-empty input.
RankVector rank_transform(std::span<const double> values);

inline double eval_rank_kernel(const RankVector& ranks, std::size_t i, std::size_t j) {
    return ranks[i] - ranks[j];
}

/// A kernel bound to one coordinate (entries or exits) of a dataset.
///
/// The rank kernel is the linear kernel applied to rank(x)/n, so a bound
/// kernel is just a value vector plus a choice between sign(v_i - v_j) and
/// v_i - v_j. Binding does the dataset-level rank pass once.
class BoundKernel {
public:
    BoundKernel(KernelSpec spec, std::span<const double> values);

    double operator()(std::size_t i, std::size_t j) const {
        return use_sign_ ? eval_sign(values_[i], values_[j]) : values_[i] - values_[j];
    }

    KernelSpec spec() const { return spec_; }
    bool is_sign() const { return use_sign_; }
    std::span<const double> values() const { return values_; }

private:
    KernelSpec spec_;
    bool use_sign_;
    std::vector<double> values_;
};

}  // namespace qi
