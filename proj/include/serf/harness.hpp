#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "serf/activations.hpp"
#include "serf/datasets.hpp"
#include "serf/init.hpp"
#include "serf/optim.hpp"

namespace serf {

enum class AxisTag {
    dense_units,
    dropout_rates,
    initializers,
    learning_rates,
    optimizers,
    num_layers,
    batch_sizes,
};

const char* axis_name(AxisTag tag);
std::optional<AxisTag> parse_axis_tag(std::string_view name);

// One swept hyperparameter. Values are kept as the tokens the config file
// used; they are validated against the axis type up front.
struct AblationAxis {
    AxisTag tag = AxisTag::dense_units;
    std::vector<std::string> values;
};

struct AblationConfig {
    AblationAxis axis;

    std::size_t hidden_width = 64;
    std::size_t hidden_layers = 1;
    bool batch_norm = true;
    double dropout = 0.0;
    Initializer initializer = make_initializer(InitTag::glorot_uniform);
    std::vector<ActivationTag> activations = {ActivationTag::swish, ActivationTag::mish,
                                              ActivationTag::serf};

    std::size_t epochs = 10;
    std::size_t batch_size = 64;
    OptimTag optimizer = OptimTag::adam;
    double learning_rate = 0.001;
    std::vector<std::uint64_t> seeds = {1};

    std::string dataset = "synthetic";  // synthetic | mnist | auto
    bool standardize = false;

    std::string records_path = "records.csv";
    std::size_t workers = 1;
};

// Parses the key=value section format; error messages carry line numbers.
AblationConfig parse_ablation_config_text(const std::string& text, const std::string& source);
AblationConfig load_ablation_config(const std::string& path);

struct MetricsRecord {
    std::string axis;
    std::string axis_value;
    std::string activation;
    std::uint64_t seed = 0;
    std::string status = "ok";  // ok | diverged
    double accuracy = 0.0;
    double final_train_loss = 0.0;
    std::size_t epochs = 0;
    double wall_seconds = 0.0;
};

// Full equality; NaN losses (diverged runs) match each other.
bool operator==(const MetricsRecord& a, const MetricsRecord& b);

// Equality on the deterministic fields only, ignoring wall_seconds.
bool records_equivalent(const MetricsRecord& a, const MetricsRecord& b);

inline constexpr const char* kRecordsSchema = "# serf-ablation-records v1";
inline constexpr const char* kRecordsHeader =
    "axis,axis_value,activation,seed,status,accuracy,final_train_loss,epochs,wall_seconds";

std::string record_to_csv_line(const MetricsRecord& r);
void write_records_csv(const std::string& path, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> read_records_csv(const std::string& path);

// Runs the full grid (axis values x activations x seeds). Each record is
// appended to records_path as soon as its cell finishes; when the sweep
// completes the file is rewritten in grid order. A run whose loss goes
// non-finite is recorded as status=diverged and the sweep continues.
std::vector<MetricsRecord> run_ablation(const AblationConfig& config,
                                        const std::string& out_dir);

struct SummaryRow {
    std::string axis;
    std::string axis_value;
    std::string activation;
    std::size_t runs = 0;      // converged runs
    std::size_t diverged = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // population convention
};

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string summary_text(const std::vector<SummaryRow>& rows);

// Train/test pair per the config's dataset setting: "mnist" requires the
// cache dir, "synthetic" builds the stock blobs, "auto" prefers MNIST when
// present and falls back to the blobs.
TrainTest load_harness_data(const AblationConfig& config);

}  // namespace serf
