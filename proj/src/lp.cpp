#include "revpref/lp.hpp"

#include "revpref/errors.hpp"

#include <vector>

namespace revpref {

LpFeasibility lp_feasible(int nvars, const std::vector<LinearConstraint>& rows) {
    LpFeasibility out;
    const int m = static_cast<int>(rows.size());
    if (m == 0) {
        out.feasible = true;
        out.point.assign(nvars, Rat(0));
        return out;
    }

    // Standard form: surplus column per inequality row, then sign-normalize
    // so every right-hand side is nonnegative, then one artificial per row.
    // Phase 1 minimizes the artificial sum; zero means feasible.
    int nslack = 0;
    for (const auto& row : rows)
        if (!row.equality) ++nslack;
    const int ncols = nvars + nslack + m; // structural + surplus + artificial
    std::vector<std::vector<Rat>> T(m, std::vector<Rat>(ncols + 1, Rat(0)));
    std::vector<int> basis(m);

    int slack_at = nvars;
    for (int i = 0; i < m; ++i) {
        const auto& row = rows[i];
        for (int j = 0; j < nvars && j < static_cast<int>(row.coeffs.size()); ++j)
            T[i][j] = row.coeffs[j];
        if (!row.equality) T[i][slack_at] = Rat(-1);
        T[i][ncols] = row.rhs;
        if (T[i][ncols] < 0)
            for (int j = 0; j <= ncols; ++j) T[i][j] = -T[i][j];
        int art = nvars + nslack + i;
        T[i][art] = Rat(1);
        basis[i] = art;
        if (!row.equality) ++slack_at;
    }

    auto is_artificial = [&](int col) { return col >= nvars + nslack; };

    while (true) {
        // Reduced cost of column j under the phase-1 objective equals the
        // negated sum of its entries in artificial-basic rows; Bland's rule
        // picks the lowest improving column, which rules out cycling.
        int enter = -1;
        for (int j = 0; j < nvars + nslack && enter < 0; ++j) {
            Rat weight(0);
            for (int i = 0; i < m; ++i)
                if (is_artificial(basis[i])) weight += T[i][j];
            if (weight > 0) enter = j;
        }
        if (enter < 0) break;

        int leave = -1;
        Rat best_ratio(0);
        for (int i = 0; i < m; ++i) {
            if (T[i][enter] <= 0) continue;
            Rat ratio = T[i][ncols] / T[i][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) break; // unbounded improving direction cannot happen in phase 1

        Rat pivot = T[leave][enter];
        for (int j = 0; j <= ncols; ++j) T[leave][j] /= pivot;
        for (int i = 0; i < m; ++i) {
            if (i == leave || T[i][enter] == 0) continue;
            Rat factor = T[i][enter];
            for (int j = 0; j <= ncols; ++j) T[i][j] -= factor * T[leave][j];
        }
        basis[leave] = enter;
    }

    Rat infeasibility(0);
    for (int i = 0; i < m; ++i)
        if (is_artificial(basis[i])) infeasibility += T[i][ncols];
    if (infeasibility != 0) return out;

    out.feasible = true;
    out.point.assign(nvars, Rat(0));
    for (int i = 0; i < m; ++i)
        if (basis[i] < nvars) out.point[basis[i]] = T[i][ncols];
    return out;
}

std::vector<int> lp_infeasible_core(int nvars, const std::vector<LinearConstraint>& rows) {
    internal_check(!lp_feasible(nvars, rows).feasible,
                   "deletion filter called on a feasible system");
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) keep.push_back(i);

    for (int candidate = 0; candidate < static_cast<int>(rows.size()); ++candidate) {
        std::vector<int> trial;
        std::vector<LinearConstraint> sub;
        for (int idx : keep) {
            if (idx == candidate) continue;
            trial.push_back(idx);
            sub.push_back(rows[idx]);
        }
        if (trial.size() == keep.size()) continue; // candidate already dropped
        if (!lp_feasible(nvars, sub).feasible) keep = std::move(trial);
    }
    return keep;
}

} // namespace revpref
