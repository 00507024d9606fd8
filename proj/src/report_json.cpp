#include "report_json.hpp"

#include <cmath>

namespace freeconv {

namespace {

nlohmann::json number_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

nlohmann::json to_json(const SupportReport& rep)
{
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [l, r] : rep.components) {
        comps.push_back({l, r});
    }
    return {{"components", comps},
            {"interior_zeros", rep.interior_zeros},
            {"divergence_points", rep.divergence_points},
            {"counts", {{"I", rep.I}, {"C0", rep.C0}, {"Cinf", rep.Cinf}}},
            {"edge_mismatches", rep.edge_mismatches},
            {"threshold", rep.threshold}};
}

nlohmann::json to_json(const BoundsReport& rep)
{
    nlohmann::json sets;
    if (rep.kind == BoundsKind::Semigroup) {
        sets["Z_mu"] = rep.zero_set;
    } else {
        sets["E_alpha"] = rep.E_alpha;
        sets["E_beta"] = rep.E_beta;
        sets["P_alpha"] = rep.P_alpha;
        sets["P_beta"] = rep.P_beta;
        sets["N_alpha"] = rep.N_alpha;
    }
    nlohmann::json verdicts = nlohmann::json::object();
    for (const auto& v : rep.verdicts) {
        verdicts[v.name] = {{"pass", v.pass}, {"detail", v.detail}};
    }
    nlohmann::json out = {{"kind", rep.kind == BoundsKind::Semigroup ? "semigroup" : "pair"},
                          {"theorem", rep.theorem},
                          {"measured", {{"I", rep.I}, {"C0", rep.C0}, {"Cinf", rep.Cinf}}},
                          {"sets", sets},
                          {"lower", rep.lower},
                          {"upper", rep.upper},
                          {"coarse_upper", rep.coarse_upper},
                          {"verdicts", verdicts},
                          {"pass", rep.all_pass()}};
    if (rep.kind == BoundsKind::Semigroup) {
        out["t"] = rep.t;
        out["expected_Cinf"] = rep.expected_cinf;
    } else {
        out["swapped"] = rep.swapped;
        if (!rep.decomposition.empty()) {
            out["decomposition"] = rep.decomposition;
        }
    }
    return out;
}

nlohmann::json to_json(const ValidationReport& rep)
{
    return {{"matrix_size", rep.matrix_size},
            {"trials", rep.trials},
            {"seed", rep.seed},
            {"ensemble", rep.ensemble == Ensemble::Unitary ? "unitary" : "orthogonal"},
            {"ks_distance", rep.ks_distance},
            {"empirical_components", rep.empirical_components},
            {"gap_occupancy", rep.gap_occupancy},
            {"max_trace_error", rep.max_trace_error}};
}

nlohmann::json grid_summary(const DensityGrid& dg)
{
    int counts[4] = {0, 0, 0, 0};
    for (auto f : dg.flags) {
        ++counts[static_cast<int>(f)];
    }
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : dg.atoms) {
        atoms.push_back({{"x", a.location}, {"mass", a.mass}});
    }
    double max_err = 0.0;
    for (std::size_t i = 0; i < dg.size(); ++i) {
        if (dg.flags[i] == PointFlag::Ok) {
            max_err = std::max(max_err, dg.boundary_error[i]);
        }
    }
    return {{"kind", dg.pair ? "pair" : "semigroup"},
            {"t", number_or_null(dg.pair ? NAN : dg.t)},
            {"window", {dg.window_lo, dg.window_hi}},
            {"points", dg.size()},
            {"flags",
             {{"ok", counts[0]}, {"divergent", counts[1]}, {"atom", counts[2]}, {"ladder_failed", counts[3]}}},
            {"atoms", atoms},
            {"mass", grid_moment(dg, 0)},
            {"max_boundary_error", max_err}};
}

} // namespace freeconv
