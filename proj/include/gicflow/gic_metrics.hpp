// Transformer effective GIC, GIC-driven reactive losses, the 75 A screening
// report, and the scenario comparison quantifying the error of leaving
// offline generators' GSUs in service.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gicflow/grid_model.hpp"
#include "gicflow/solution.hpp"

namespace gicflow {

// Single per-phase current summarizing the magnetizing effect of all winding
// GICs. Winding arguments are three-phase totals, signed positive from the
// bus terminal toward the neutral (series winding: high toward low).
//
//   two-winding:    |I_H + I_L / a| / 3        with a = kV_high / kV_low
//   gwye-delta:     |I_H| / 3                  (delta side carries none)
//   delta-delta:    0
//   auto:           |(kV_H - kV_L) I_series + kV_L I_common| / (3 kV_H)
inline double effective_gic(const Transformer& transformer, double winding_high_gic_a,
                            double winding_low_gic_a, double kv_high, double kv_low) {
    switch (transformer.configuration) {
        case TransformerConfig::GwyeDelta:
        case TransformerConfig::GwyeDeltaGsu:
            return std::abs(winding_high_gic_a) / 3.0;
        case TransformerConfig::GwyeGwye: {
            if (!(kv_low > 0.0))
                throw Error("transformer \"" + transformer.id + "\" has non-positive low-side kV");
            const double a = kv_high / kv_low;
            return std::abs(winding_high_gic_a + winding_low_gic_a / a) / 3.0;
        }
        case TransformerConfig::DeltaDelta:
            return 0.0;
        case TransformerConfig::Auto: {
            if (!(kv_high > 0.0))
                throw Error("transformer \"" + transformer.id + "\" has non-positive high-side kV");
            return std::abs((kv_high - kv_low) * winding_high_gic_a +
                            kv_low * winding_low_gic_a) /
                   (3.0 * kv_high);
        }
    }
    throw Error("transformer \"" + transformer.id + "\" has unknown configuration");
}

// GIC-driven reactive loss. The coefficient is data (loss susceptibility is
// transformer-specific); the voltage is the high-side bus per-unit value.
inline double qloss_mvar(const Transformer& transformer, double effective_gic_a_per_phase,
                         double v_pu) {
    if (transformer.k_factor_mvar_per_a < 0.0)
        throw Error("transformer \"" + transformer.id + "\" has negative k factor");
    return transformer.k_factor_mvar_per_a * v_pu * effective_gic_a_per_phase;
}

// NERC screening: transformers whose per-phase effective GIC exceeds the
// threshold (strictly), sorted by id.
inline std::vector<std::string> threshold_report(const GicSolution& solution,
                                                 double threshold_a_per_phase = 75.0) {
    std::vector<std::string> ids;
    for (const auto& t : solution.transformers)
        if (t.effective_gic_a_per_phase > threshold_a_per_phase) ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// Audit companion to threshold_report: ids sitting exactly at the threshold,
// which the strict comparison excludes.
inline std::vector<std::string> threshold_boundary_audit(const GicSolution& solution,
                                                         double threshold_a_per_phase = 75.0) {
    std::vector<std::string> ids;
    for (const auto& t : solution.transformers)
        if (t.effective_gic_a_per_phase == threshold_a_per_phase) ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

struct DeltaStats {
    std::size_t count = 0;
    double mean_abs = 0.0;
    double std_abs = 0.0;  // sample standard deviation (n - 1)
    double max_abs = 0.0;
};

namespace detail {

inline DeltaStats delta_stats(const std::vector<double>& abs_deltas) {
    DeltaStats s;
    s.count = abs_deltas.size();
    if (s.count == 0) return s;
    double sum = 0.0;
    for (double d : abs_deltas) {
        sum += d;
        s.max_abs = std::max(s.max_abs, d);
    }
    s.mean_abs = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double d : abs_deltas) ss += (d - s.mean_abs) * (d - s.mean_abs);
        s.std_abs = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    return s;
}

}  // namespace detail

enum class DeltaQuantity { NeutralGic, BranchGic };

struct DeltaDistribution {
    double bin_width_a = 1.0;
    std::vector<std::size_t> bins;  // |delta| in [i*w, (i+1)*w)
    DeltaStats stats;
};

// Distribution of absolute per-device differences between two solutions of
// the same grid. Id sets for the chosen quantity must match exactly.
inline DeltaDistribution delta_distribution(const GicSolution& a, const GicSolution& b,
                                            DeltaQuantity quantity, double bin_width_a = 1.0) {
    if (!(bin_width_a > 0.0)) throw Error("delta distribution bin width must be > 0");
    std::vector<double> abs_deltas;
    if (quantity == DeltaQuantity::NeutralGic) {
        if (a.transformers.size() != b.transformers.size())
            throw Error("delta distribution: transformer sets differ");
        for (std::size_t i = 0; i < a.transformers.size(); ++i) {
            if (a.transformers[i].id != b.transformers[i].id)
                throw Error("delta distribution: transformer sets differ at \"" +
                            a.transformers[i].id + "\"");
            abs_deltas.push_back(
                std::abs(a.transformers[i].neutral_gic_a - b.transformers[i].neutral_gic_a));
        }
    } else {
        if (a.branches.size() != b.branches.size())
            throw Error("delta distribution: branch sets differ");
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            if (a.branches[i].id != b.branches[i].id)
                throw Error("delta distribution: branch sets differ at \"" + a.branches[i].id +
                            "\"");
            abs_deltas.push_back(
                std::abs(a.branches[i].gic_a_per_phase - b.branches[i].gic_a_per_phase));
        }
    }

    DeltaDistribution dist;
    dist.bin_width_a = bin_width_a;
    dist.stats = detail::delta_stats(abs_deltas);
    std::size_t bin_count =
        static_cast<std::size_t>(std::floor(dist.stats.max_abs / bin_width_a)) + 1;
    dist.bins.assign(bin_count, 0);
    for (double d : abs_deltas) {
        std::size_t bin = static_cast<std::size_t>(std::floor(d / bin_width_a));
        if (bin >= bin_count) bin = bin_count - 1;  // d == max on the closed end
        ++dist.bins[bin];
    }
    return dist;
}

// Paired-scenario comparison. "in" is the scenario with the offline
// generators' GSUs (incorrectly) left in service; "out" has them removed.
struct ScenarioDiff {
    std::vector<std::string> common_transformers;  // in service in BOTH scenarios, sorted
    double qloss_in_mvar = 0.0;                    // sums over the common set only
    double qloss_out_mvar = 0.0;
    double qloss_difference_mvar = 0.0;  // out - in, exact
    double qloss_error_pct = 0.0;        // 100 * (out - in) / out
    std::map<std::string, double> per_area_error_pct;  // attributed by high-side bus area
    int threshold_count_in = 0;
    int threshold_count_out = 0;
    std::vector<std::string> threshold_boundary_in;  // audit: exactly at threshold
    std::vector<std::string> threshold_boundary_out;
    DeltaStats neutral_delta_stats;  // over all matched transformers
    DeltaStats branch_delta_stats;   // over all matched branches, A per phase
};

// Error convention: the denominator is the GSUs-out total, i.e. the error the
// incorrect model commits relative to the corrected one. Values are exact;
// rounding happens only at presentation.
inline double qloss_error_pct(double qloss_in_mvar, double qloss_out_mvar) {
    if (qloss_out_mvar == 0.0) return 0.0;
    return 100.0 * (qloss_out_mvar - qloss_in_mvar) / qloss_out_mvar;
}

inline ScenarioDiff compare_scenarios(const GicSolution& sol_in, const GicSolution& sol_out,
                                      const GridModel& model_in, const GridModel& model_out,
                                      double threshold_a_per_phase = 75.0) {
    if (model_in.transformers.size() != model_out.transformers.size() ||
        model_in.buses.size() != model_out.buses.size() ||
        model_in.branches.size() != model_out.branches.size())
        throw Error("compare_scenarios: the two scenarios are not the same grid");
    if (sol_in.transformers.size() != sol_out.transformers.size())
        throw Error("compare_scenarios: solutions carry different transformer sets");

    std::map<std::string, bool> in_service_in, in_service_out;
    for (const auto& t : model_in.transformers) in_service_in[t.id] = t.in_service;
    for (const auto& t : model_out.transformers) {
        if (!in_service_in.count(t.id))
            throw Error("compare_scenarios: transformer \"" + t.id +
                        "\" missing from the first scenario");
        in_service_out[t.id] = t.in_service;
    }

    // high-side bus area per transformer (the attribution rule for Table II)
    std::map<std::string, std::string> area_of;
    {
        ModelIndex index(model_in);
        for (const auto& t : model_in.transformers) {
            const Bus* high = index.bus(t.bus_high);
            area_of[t.id] = high != nullptr ? high->area : std::string();
        }
    }

    ScenarioDiff diff;
    std::map<std::string, double> area_in, area_out;
    for (std::size_t i = 0; i < sol_in.transformers.size(); ++i) {
        const auto& tin = sol_in.transformers[i];
        const auto& tout = sol_out.transformers[i];
        if (tin.id != tout.id)
            throw Error("compare_scenarios: solutions disagree at transformer \"" + tin.id +
                        "\"");
        if (!in_service_in[tin.id] || !in_service_out[tin.id]) continue;
        diff.common_transformers.push_back(tin.id);
        diff.qloss_in_mvar += tin.qloss_mvar;
        diff.qloss_out_mvar += tout.qloss_mvar;
        area_in[area_of[tin.id]] += tin.qloss_mvar;
        area_out[area_of[tin.id]] += tout.qloss_mvar;
    }

    diff.qloss_difference_mvar = diff.qloss_out_mvar - diff.qloss_in_mvar;
    diff.qloss_error_pct = qloss_error_pct(diff.qloss_in_mvar, diff.qloss_out_mvar);
    for (const auto& [area, out_total] : area_out)
        diff.per_area_error_pct[area] = qloss_error_pct(area_in[area], out_total);

    diff.threshold_count_in =
        static_cast<int>(threshold_report(sol_in, threshold_a_per_phase).size());
    diff.threshold_count_out =
        static_cast<int>(threshold_report(sol_out, threshold_a_per_phase).size());
    diff.threshold_boundary_in = threshold_boundary_audit(sol_in, threshold_a_per_phase);
    diff.threshold_boundary_out = threshold_boundary_audit(sol_out, threshold_a_per_phase);

    diff.neutral_delta_stats =
        delta_distribution(sol_in, sol_out, DeltaQuantity::NeutralGic).stats;
    diff.branch_delta_stats = delta_distribution(sol_in, sol_out, DeltaQuantity::BranchGic).stats;
    return diff;
}

}  // namespace gicflow
