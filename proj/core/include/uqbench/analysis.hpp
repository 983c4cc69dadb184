#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "uqbench/types.hpp"

namespace uqbench::analysis {

// One question's worth of benchmark data: ground-truth uncertainties on one
// side, black-box metrics on the other.
struct BenchmarkRow {
    std::string question_id;
    UncertaintyProfile profile;
    MetricReport metrics;
    double accuracy = 0.0; // fraction correct over the trace's M*K samples
};

enum class CorrelationMethod { Pearson, Spearman };
enum class MetricField { Npe, Lnpe, TopDisp, Intra };
enum class TruthField { AnsU, CU, Aleatoric, Epistemic };

inline constexpr std::array<MetricField, 4> kMetricFields = {
    MetricField::Npe, MetricField::Lnpe, MetricField::TopDisp, MetricField::Intra};
inline constexpr std::array<TruthField, 4> kTruthFields = {
    TruthField::AnsU, TruthField::CU, TruthField::Aleatoric, TruthField::Epistemic};

std::string_view metric_field_name(MetricField f);
std::string_view truth_field_name(TruthField f);
std::string_view method_name(CorrelationMethod m);
CorrelationMethod method_from_name(std::string_view name);

std::optional<double> metric_value(const MetricReport& m, MetricField f);
double truth_value(const UncertaintyProfile& p, TruthField f);

// Sample correlation; nullopt when either side has zero variance (undefined,
// deliberately not coerced to 0). Spearman ranks ties by average rank.
// Throws ContractError on length mismatch, fewer than 3 pairs, or non-finite
// values.
std::optional<double> correlation(const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  CorrelationMethod method);

struct CorrelationMatrix {
    CorrelationMethod method = CorrelationMethod::Pearson;
    // cells[metric][truth]; nullopt = undefined (zero variance, or too few
    // intra pairs after pairwise exclusion).
    std::array<std::array<std::optional<double>, 4>, 4> cells;
    // Pairs entering each metric's row; differs from rows.size() only for
    // intra, which excludes rows without confidences pairwise.
    std::array<std::size_t, 4> pair_counts{};
};

CorrelationMatrix correlation_matrix(const std::vector<BenchmarkRow>& rows,
                                     CorrelationMethod method);

struct AccuracyBin {
    double center = 0.0;
    std::optional<double> mean_accuracy; // nullopt for empty bins
    std::size_t count = 0;
};

// Equal-width bins over the observed range of the chosen truth field.
std::vector<AccuracyBin> accuracy_curve(const std::vector<BenchmarkRow>& rows,
                                        TruthField field, int bins);

struct ScatterPoint {
    std::string question_id;
    double metric = 0.0;
    double truth = 0.0;
};

struct ScatterTable {
    std::size_t omitted = 0; // rows skipped for a missing metric (intra only)
    std::vector<ScatterPoint> points; // sorted by question_id
};

ScatterTable export_scatter(const std::vector<BenchmarkRow>& rows,
                            MetricField metric_field, TruthField truth_field);

// CSV renderings. Doubles use shortest round-trip formatting; undefined cells
// are spelled "undefined".
std::string matrix_csv(const CorrelationMatrix& m);
std::string scatter_csv(const ScatterTable& t);
std::string curve_csv(const std::vector<AccuracyBin>& bins);

} // namespace uqbench::analysis
