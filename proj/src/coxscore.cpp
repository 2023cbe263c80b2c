#include "qi/coxscore.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qi/kernels.hpp"
#include "qi/pair_sums.hpp"
#include "qi/summation.hpp"
#include "qi/teststat.hpp"

namespace qi {

namespace {

std::vector<std::size_t> event_order(const Dataset& data) {
    std::vector<std::size_t> idx;
    const auto d = data.events();
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (d[i]) idx.push_back(i);
    }
    const auto x = data.exits();
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    return idx;
}

std::vector<std::size_t> order_by(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

double covariate_direct(const Dataset& data, const Covariate& a) {
    const auto e = data.entries();
    const auto x = data.exits();
    const auto d = data.events();
    const std::size_t n = data.size();
    std::vector<double> av(n);
    for (std::size_t j = 0; j < n; ++j) av[j] = a(e[j]);

    CompensatedSum score;
    for (std::size_t i = 0; i < n; ++i) {
        if (!d[i]) continue;
        const double t = x[i];
        double at_risk = 0.0;
        CompensatedSum weighted;
        for (std::size_t j = 0; j < n; ++j) {
            if (e[j] < t && t <= x[j]) {
                at_risk += 1.0;
                weighted += av[j];
            }
        }
        score += at_risk * (av[i] - weighted.value() / at_risk);
    }
    return score.value();
}

// Y(t) = #{L_j < t} - #{T_j < t}, since L_j < T_j for every row; the same
// difference of prefix sums gives sum over the risk set of a(L_j).
double covariate_sweep(const Dataset& data, const Covariate& a) {
    const auto e = data.entries();
    const auto x = data.exits();
    const std::size_t n = data.size();

    const auto by_entry = order_by(e);
    const auto by_exit = order_by(x);
    std::vector<double> sorted_entry(n), sorted_exit(n);
    std::vector<long double> entry_prefix(n + 1, 0.0L), exit_prefix(n + 1, 0.0L);
    for (std::size_t k = 0; k < n; ++k) {
        sorted_entry[k] = e[by_entry[k]];
        sorted_exit[k] = x[by_exit[k]];
        entry_prefix[k + 1] = entry_prefix[k] + a(e[by_entry[k]]);
        exit_prefix[k + 1] = exit_prefix[k] + a(e[by_exit[k]]);
    }

    CompensatedSum score;
    for (std::size_t i : event_order(data)) {
        const double t = x[i];
        const auto n_entered = static_cast<std::size_t>(
            std::lower_bound(sorted_entry.begin(), sorted_entry.end(), t) - sorted_entry.begin());
        const auto n_left = static_cast<std::size_t>(
            std::lower_bound(sorted_exit.begin(), sorted_exit.end(), t) - sorted_exit.begin());
        const auto at_risk = static_cast<double>(n_entered - n_left);
        const auto weighted =
            static_cast<double>(entry_prefix[n_entered] - exit_prefix[n_left]);
        score += at_risk * a(e[i]) - weighted;
    }
    return score.value();
}

double rankstar_direct(const Dataset& data) {
    const auto e = data.entries();
    const auto x = data.exits();
    const auto d = data.events();
    const std::size_t n = data.size();

    CompensatedSum score;
    std::vector<double> risk_entries;
    for (std::size_t i = 0; i < n; ++i) {
        if (!d[i]) continue;
        const double t = x[i];
        risk_entries.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (e[j] < t && t <= x[j]) risk_entries.push_back(e[j]);
        }
        std::sort(risk_entries.begin(), risk_entries.end());
        const auto rank_of = [&](double l) {
            // 1 + number at risk with a strictly larger entry time
            const auto above = risk_entries.end() -
                               std::upper_bound(risk_entries.begin(), risk_entries.end(), l);
            return 1.0 + static_cast<double>(above);
        };
        const auto at_risk = static_cast<double>(risk_entries.size());
        double rank_total = 0.0;
        for (double l : risk_entries) rank_total += rank_of(l);
        score += at_risk * (rank_of(e[i]) / at_risk - rank_total / (at_risk * at_risk));
    }
    return score.value();
}

// Fenwick tree over compressed entry values, tracking the current risk set.
class RiskSetCounter {
public:
    explicit RiskSetCounter(std::size_t levels) : tree_(levels + 1, 0), multiplicity_(levels, 0) {}

    void insert(std::size_t level) {
        tied_pairs_ += multiplicity_[level];
        ++multiplicity_[level];
        ++size_;
        update(level, +1);
    }
    void erase(std::size_t level) {
        --multiplicity_[level];
        tied_pairs_ -= multiplicity_[level];
        --size_;
        update(level, -1);
    }
    std::int64_t size() const { return size_; }
    std::int64_t tied_pairs() const { return tied_pairs_; }
    /// Members with level strictly above `level`.
    std::int64_t count_above(std::size_t level) const { return size_ - prefix(level + 1); }

private:
    void update(std::size_t level, std::int64_t delta) {
        for (std::size_t k = level + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
    }
    std::int64_t prefix(std::size_t count) const {
        std::int64_t s = 0;
        for (std::size_t k = count; k > 0; k -= k & (~k + 1)) s += tree_[k];
        return s;
    }

    std::vector<std::int64_t> tree_;
    std::vector<std::int64_t> multiplicity_;
    std::int64_t size_ = 0;
    std::int64_t tied_pairs_ = 0;
};

double rankstar_sweep(const Dataset& data) {
    const auto e = data.entries();
    const auto x = data.exits();
    const std::size_t n = data.size();

    std::vector<double> levels(e.begin(), e.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<std::size_t> level(n);
    for (std::size_t j = 0; j < n; ++j) {
        level[j] = static_cast<std::size_t>(
            std::lower_bound(levels.begin(), levels.end(), e[j]) - levels.begin());
    }

    const auto by_entry = order_by(e);
    const auto by_exit = order_by(x);
    RiskSetCounter risk(levels.size());
    std::size_t next_in = 0, next_out = 0;

    CompensatedSum score;
    for (std::size_t i : event_order(data)) {
        const double t = x[i];
        while (next_in < n && e[by_entry[next_in]] < t) risk.insert(level[by_entry[next_in++]]);
        while (next_out < n && x[by_exit[next_out]] < t) risk.erase(level[by_exit[next_out++]]);

        const auto y = static_cast<double>(risk.size());
        const double rank_i = 1.0 + static_cast<double>(risk.count_above(level[i]));
        // sum of ranks over the risk set = Y + #{ordered pairs with L_j < L_k}
        const double ordered_pairs =
            0.5 * y * (y - 1.0) - static_cast<double>(risk.tied_pairs());
        score += rank_i - (y + ordered_pairs) / y;
    }
    return score.value();
}

}  // namespace

double cox_score_covariate(const Dataset& data, const Covariate& a, ScoreMethod method) {
    return method == ScoreMethod::Direct ? covariate_direct(data, a) : covariate_sweep(data, a);
}

double cox_score_rankstar(const Dataset& data, ScoreMethod method) {
    return method == ScoreMethod::Direct ? rankstar_direct(data) : rankstar_sweep(data);
}

double cox_covariate_pairwise(const Dataset& data, const Covariate& a) {
    const auto e = data.entries();
    const auto x = data.exits();
    const std::size_t n = data.size();
    std::vector<double> av(n);
    for (std::size_t j = 0; j < n; ++j) av[j] = a(e[j]);

    CompensatedSum total;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!comparable(data, i, j, Region::Lambda)) continue;
            total += (av[i] - av[j]) * eval_sign(x[i], x[j]);
        }
    }
    return -total.value();
}

double cox_rankstar_pairwise(const Dataset& data) {
    if (data.size() < 2) return 0.0;
    return 0.5 * u_numerator(data, kSign, kSign, Region::Lambda);
}

bool has_tied_times(const Dataset& data) {
    std::vector<double> all(data.entries().begin(), data.entries().end());
    all.insert(all.end(), data.exits().begin(), data.exits().end());
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) != all.end();
}

}  // namespace qi
