#include "uqbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"

namespace uqbench::analysis {

namespace {

std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) {
            ++j;
        }
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return std::nullopt; // zero variance: correlation undefined
    }
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

std::string cell_to_csv(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("undefined");
}

} // namespace

std::string_view metric_field_name(MetricField f) {
    switch (f) {
        case MetricField::Npe: return "npe";
        case MetricField::Lnpe: return "lnpe";
        case MetricField::TopDisp: return "top_disp";
        case MetricField::Intra: return "intra";
    }
    throw ContractError("unknown metric field");
}

std::string_view truth_field_name(TruthField f) {
    switch (f) {
        case TruthField::AnsU: return "ansu";
        case TruthField::CU: return "cu";
        case TruthField::Aleatoric: return "au";
        case TruthField::Epistemic: return "eu";
    }
    throw ContractError("unknown truth field");
}

std::string_view method_name(CorrelationMethod m) {
    return m == CorrelationMethod::Pearson ? "pearson" : "spearman";
}

CorrelationMethod method_from_name(std::string_view name) {
    if (name == "pearson") return CorrelationMethod::Pearson;
    if (name == "spearman") return CorrelationMethod::Spearman;
    throw ConfigError("unknown correlation method: " + std::string(name));
}

std::optional<double> metric_value(const MetricReport& m, MetricField f) {
    switch (f) {
        case MetricField::Npe: return m.npe;
        case MetricField::Lnpe: return m.lnpe;
        case MetricField::TopDisp: return m.top_disp;
        case MetricField::Intra: return m.intra;
    }
    throw ContractError("unknown metric field");
}

double truth_value(const UncertaintyProfile& p, TruthField f) {
    switch (f) {
        case TruthField::AnsU: return p.ansu;
        case TruthField::CU: return p.cu;
        case TruthField::Aleatoric: return p.aleatoric;
        case TruthField::Epistemic: return p.epistemic;
    }
    throw ContractError("unknown truth field");
}

std::optional<double> correlation(const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  CorrelationMethod method) {
    if (xs.size() != ys.size()) {
        throw ContractError("correlation over columns of different length");
    }
    if (xs.size() < 3) {
        throw ContractError("correlation needs at least 3 pairs");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            throw ContractError("correlation over non-finite values");
        }
    }
    if (method == CorrelationMethod::Pearson) {
        return pearson(xs, ys);
    }
    return pearson(average_ranks(xs), average_ranks(ys));
}

CorrelationMatrix correlation_matrix(const std::vector<BenchmarkRow>& rows,
                                     CorrelationMethod method) {
    if (rows.size() < 3) {
        throw ContractError("correlation_matrix needs at least 3 rows");
    }
    CorrelationMatrix out;
    out.method = method;
    for (std::size_t mi = 0; mi < kMetricFields.size(); ++mi) {
        // Pairwise exclusion: only intra can be absent, and only its row
        // shrinks when it is.
        std::vector<double> metric_col;
        std::vector<std::size_t> kept;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (auto v = metric_value(rows[r].metrics, kMetricFields[mi])) {
                metric_col.push_back(*v);
                kept.push_back(r);
            }
        }
        out.pair_counts[mi] = metric_col.size();
        for (std::size_t ti = 0; ti < kTruthFields.size(); ++ti) {
            if (metric_col.size() < 3) {
                out.cells[mi][ti] = std::nullopt;
                continue;
            }
            std::vector<double> truth_col;
            truth_col.reserve(kept.size());
            for (std::size_t r : kept) {
                truth_col.push_back(truth_value(rows[r].profile, kTruthFields[ti]));
            }
            out.cells[mi][ti] = correlation(metric_col, truth_col, method);
        }
    }
    return out;
}

std::vector<AccuracyBin> accuracy_curve(const std::vector<BenchmarkRow>& rows,
                                        TruthField field, int bins) {
    if (bins < 2) {
        throw ContractError("accuracy_curve needs at least 2 bins");
    }
    if (rows.empty()) {
        throw ContractError("accuracy_curve over no rows");
    }
    double lo = truth_value(rows.front().profile, field);
    double hi = lo;
    for (const auto& r : rows) {
        const double v = truth_value(r.profile, field);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<AccuracyBin> out(static_cast<std::size_t>(bins));
    std::vector<double> sums(static_cast<std::size_t>(bins), 0.0);
    for (int i = 0; i < bins; ++i) {
        out[static_cast<std::size_t>(i)].center =
            width > 0.0 ? lo + (static_cast<double>(i) + 0.5) * width : lo;
    }
    for (const auto& r : rows) {
        const double v = truth_value(r.profile, field);
        std::size_t idx = 0;
        if (width > 0.0) {
            idx = static_cast<std::size_t>((v - lo) / width);
            idx = std::min(idx, static_cast<std::size_t>(bins - 1)); // v == hi lands in the top bin
        }
        out[idx].count += 1;
        sums[idx] += r.accuracy;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].count > 0) {
            out[i].mean_accuracy = sums[i] / static_cast<double>(out[i].count);
        }
    }
    return out;
}

ScatterTable export_scatter(const std::vector<BenchmarkRow>& rows,
                            MetricField metric_field, TruthField truth_field) {
    if (rows.empty()) {
        throw ContractError("export_scatter over no rows");
    }
    ScatterTable t;
    for (const auto& r : rows) {
        const auto v = metric_value(r.metrics, metric_field);
        if (!v) {
            t.omitted += 1;
            continue;
        }
        t.points.push_back({r.question_id, *v, truth_value(r.profile, truth_field)});
    }
    std::sort(t.points.begin(), t.points.end(),
              [](const ScatterPoint& a, const ScatterPoint& b) {
                  return a.question_id < b.question_id;
              });
    return t;
}

std::string matrix_csv(const CorrelationMatrix& m) {
    std::ostringstream os;
    os << "metric";
    for (auto f : kTruthFields) {
        os << ',' << truth_field_name(f);
    }
    os << ",pairs\n";
    for (std::size_t mi = 0; mi < kMetricFields.size(); ++mi) {
        os << metric_field_name(kMetricFields[mi]);
        for (std::size_t ti = 0; ti < kTruthFields.size(); ++ti) {
            os << ',' << cell_to_csv(m.cells[mi][ti]);
        }
        os << ',' << m.pair_counts[mi] << '\n';
    }
    return os.str();
}

std::string scatter_csv(const ScatterTable& t) {
    std::ostringstream os;
    os << "# omitted=" << t.omitted << '\n';
    os << "question_id,metric,truth\n";
    for (const auto& p : t.points) {
        os << p.question_id << ',' << format_double(p.metric) << ','
           << format_double(p.truth) << '\n';
    }
    return os.str();
}

std::string curve_csv(const std::vector<AccuracyBin>& bins) {
    std::ostringstream os;
    os << "bin_center,mean_accuracy,count\n";
    for (const auto& b : bins) {
        os << format_double(b.center) << ',' << cell_to_csv(b.mean_accuracy) << ','
           << b.count << '\n';
    }
    return os.str();
}

} // namespace uqbench::analysis
