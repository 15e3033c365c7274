#include "hilite/metrics.hpp"

#include "hilite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hilite {

double mcc(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0) {
        throw ValidationError("mcc: negative count");
    }
    if (c.total() == 0) {
        throw ValidationError("mcc: all counts are zero");
    }
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) {
        return 0.0;
    }
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

double cohen_kappa(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        throw ValidationError("cohen_kappa: label sequences differ in length");
    }
    if (a.empty()) {
        throw ValidationError("cohen_kappa: empty label sequences");
    }
    const double n = static_cast<double>(a.size());
    std::map<int, double> ma, mb;
    double agree = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma[a[i]] += 1.0;
        mb[b[i]] += 1.0;
        if (a[i] == b[i]) agree += 1.0;
    }
    const double po = agree / n;
    double pe = 0.0;
    for (const auto& [label, count] : ma) {
        if (const auto it = mb.find(label); it != mb.end()) {
            pe += (count / n) * (it->second / n);
        }
    }
    if (pe >= 1.0) {
        return po >= 1.0 ? 1.0 : 0.0;
    }
    return (po - pe) / (1.0 - pe);
}

KappaResult fleiss_kappa(const std::vector<std::vector<int>>& table, int raters) {
    if (raters < 2) {
        throw ValidationError("fleiss_kappa: need at least 2 raters");
    }
    if (table.empty()) {
        throw ValidationError("fleiss_kappa: empty table");
    }
    const std::size_t k = table.front().size();
    std::vector<double> column(k, 0.0);
    const double n = raters;
    double p_sum = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& row = table[i];
        if (row.size() != k) {
            throw ValidationError("fleiss_kappa: ragged table");
        }
        long row_sum = 0;
        double sq = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (row[j] < 0) throw ValidationError("fleiss_kappa: negative count");
            row_sum += row[j];
            sq += static_cast<double>(row[j]) * row[j];
            column[j] += row[j];
        }
        if (row_sum != raters) {
            throw ValidationError("fleiss_kappa: row " + std::to_string(i) + " sums to " +
                                  std::to_string(row_sum) + ", expected " + std::to_string(raters));
        }
        p_sum += (sq - n) / (n * (n - 1.0));
    }
    const double items = static_cast<double>(table.size());
    KappaResult r;
    r.mean_item_agreement = p_sum / items;
    for (double c : column) {
        const double pj = c / (items * n);
        r.chance_agreement += pj * pj;
    }
    if (r.chance_agreement >= 1.0 - 1e-15) {
        r.degenerate = true;
        r.kappa = 1.0;
        return r;
    }
    r.kappa = (r.mean_item_agreement - r.chance_agreement) / (1.0 - r.chance_agreement);
    return r;
}

McNemarResult mcnemar_yates(long b, long c) {
    if (b < 0 || c < 0) {
        throw ValidationError("mcnemar: negative count");
    }
    if (b + c == 0) {
        throw ValidationError("mcnemar: no discordant pairs (b = c = 0)");
    }
    const double numer = std::abs(static_cast<double>(b - c)) - 1.0;
    McNemarResult r;
    r.chi2 = numer * numer / static_cast<double>(b + c);
    r.significant_at_95 = r.chi2 > kChi2Critical95;
    return r;
}

} // namespace hilite
