#include "qi/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "qi/errors.hpp"

namespace qi {

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Sign: return "sign";
        case KernelKind::Linear: return "linear";
        case KernelKind::Rank: return "rank";
    }
    return "unknown";
}

std::optional<KernelSpec> parse_kernel(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "sign") return kSign;
    if (lower == "linear") return kLinear;
    if (lower == "rank") return kRank;
    return std::nullopt;
}

RankVector rank_transform(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) throw DegenerateDataset("rank_transform: empty input");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    RankVector out;
    out.ranks.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && values[order[stop]] == values[order[start]]) ++stop;
        // positions start..stop-1 hold 1-based ranks start+1..stop
        const double midrank = 0.5 * static_cast<double>(start + 1 + stop);
        for (std::size_t k = start; k < stop; ++k) out.ranks[order[k]] = midrank * inv_n;
        start = stop;
    }
    return out;
}

BoundKernel::BoundKernel(KernelSpec spec, std::span<const double> values)
    : spec_(spec), use_sign_(spec.kind == KernelKind::Sign) {
    if (spec.kind == KernelKind::Rank) {
        values_ = rank_transform(values).ranks;
    } else {
        values_.assign(values.begin(), values.end());
    }
}

}  // namespace qi
