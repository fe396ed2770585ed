#include "serf/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "serf/nn.hpp"

namespace serf {

namespace {

// Stream id for dropout draws; grid shuffles use stream=epoch, so keep this
// outside any plausible epoch range.
constexpr std::uint64_t kDropoutStream = 0x6472703164726f70ULL;

constexpr std::size_t kSyntheticClasses = 10;
constexpr std::size_t kSyntheticDim = 16;
constexpr std::size_t kSyntheticTrainPerClass = 400;
constexpr std::size_t kSyntheticTestPerClass = 100;
constexpr std::uint64_t kSyntheticTrainSeed = 90001;
constexpr std::uint64_t kSyntheticTestSeed = 90002;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        const std::string t = trim(cur);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

[[noreturn]] void config_error(const std::string& source, std::size_t line,
                               const std::string& message) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + message);
}

double parse_double_or(const std::string& source, std::size_t line, const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        config_error(source, line, "expected a number, got '" + token + "'");
    }
    return v;
}

std::uint64_t parse_u64_or(const std::string& source, std::size_t line,
                           const std::string& token) {
    // strtoull accepts and wraps a leading minus, so screen the sign ourselves
    if (token.empty() || token[0] < '0' || token[0] > '9') {
        config_error(source, line, "expected an unsigned integer, got '" + token + "'");
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
        config_error(source, line, "expected an unsigned integer, got '" + token + "'");
    }
    return v;
}

bool parse_bool_or(const std::string& source, std::size_t line, const std::string& token) {
    if (token == "true" || token == "1" || token == "yes") return true;
    if (token == "false" || token == "0" || token == "no") return false;
    config_error(source, line, "expected true/false, got '" + token + "'");
}

void validate_axis_value(const std::string& source, std::size_t line, AxisTag tag,
                         const std::string& token) {
    switch (tag) {
        case AxisTag::dense_units:
        case AxisTag::num_layers:
        case AxisTag::batch_sizes: {
            const std::uint64_t v = parse_u64_or(source, line, token);
            if (v < 1) config_error(source, line, axis_name(tag) + std::string(" values must be >= 1"));
            break;
        }
        case AxisTag::dropout_rates: {
            const double v = parse_double_or(source, line, token);
            if (!(v >= 0.0 && v < 1.0)) {
                config_error(source, line, "dropout rates must lie in [0, 1), got '" + token + "'");
            }
            break;
        }
        case AxisTag::learning_rates: {
            const double v = parse_double_or(source, line, token);
            if (!(v > 0.0)) {
                config_error(source, line, "learning rates must be positive, got '" + token + "'");
            }
            break;
        }
        case AxisTag::initializers:
            if (!parse_init_tag(token)) {
                config_error(source, line, "unknown initializer '" + token + "'");
            }
            break;
        case AxisTag::optimizers:
            if (!parse_optim_tag(token)) {
                config_error(source, line, "unknown optimizer '" + token + "'");
            }
            break;
    }
}

struct Cell {
    std::string axis_value;
    ActivationTag activation = ActivationTag::serf;
    std::uint64_t seed = 0;
};

std::size_t value_as_count(const std::string& token) {
    return static_cast<std::size_t>(std::strtoull(token.c_str(), nullptr, 10));
}

NetworkSpec cell_network_spec(const AblationConfig& cfg, const Cell& cell, std::size_t input_dim,
                              std::size_t classes) {
    std::size_t width = cfg.hidden_width;
    std::size_t depth = cfg.hidden_layers;
    double dropout = cfg.dropout;
    Initializer init = cfg.initializer;
    switch (cfg.axis.tag) {
        case AxisTag::dense_units: width = value_as_count(cell.axis_value); break;
        case AxisTag::num_layers: depth = value_as_count(cell.axis_value); break;
        case AxisTag::dropout_rates: dropout = std::strtod(cell.axis_value.c_str(), nullptr); break;
        case AxisTag::initializers: init = make_initializer(*parse_init_tag(cell.axis_value)); break;
        default: break;
    }
    NetworkSpec spec;
    spec.input_dim = input_dim;
    spec.output_dim = classes;
    spec.seed = cell.seed;
    spec.initializer = init;
    for (std::size_t i = 0; i < depth; ++i) {
        LayerSpec l;
        l.width = width;
        l.activation = make_activation(cell.activation);
        l.batch_norm = cfg.batch_norm;
        l.dropout_rate = dropout;
        spec.layers.push_back(l);
    }
    return spec;
}

OptimizerConfig cell_optimizer(const AblationConfig& cfg, const Cell& cell) {
    double lr = cfg.learning_rate;
    OptimTag tag = cfg.optimizer;
    if (cfg.axis.tag == AxisTag::learning_rates) lr = std::strtod(cell.axis_value.c_str(), nullptr);
    if (cfg.axis.tag == AxisTag::optimizers) tag = *parse_optim_tag(cell.axis_value);
    switch (tag) {
        case OptimTag::sgd: return make_sgd(lr);
        case OptimTag::adam: return make_adam(lr);
        case OptimTag::adagrad: return make_adagrad(lr);
    }
    return make_adam(lr);
}

std::size_t cell_batch_size(const AblationConfig& cfg, const Cell& cell) {
    if (cfg.axis.tag == AxisTag::batch_sizes) return value_as_count(cell.axis_value);
    return cfg.batch_size;
}

double evaluate_accuracy(Network& net, const LabeledDataset& ds) {
    const std::size_t chunk = 1024;
    std::size_t hits = 0;
    Rng unused(0);
    for (std::size_t start = 0; start < ds.images.rows(); start += chunk) {
        const std::size_t stop = std::min(ds.images.rows(), start + chunk);
        Tensor2 xb(stop - start, ds.images.cols());
        std::memcpy(xb.data(), ds.images.row(start), xb.size() * sizeof(double));
        const Tensor2 logits = net.forward(xb, Mode::eval, unused);
        for (std::size_t i = 0; i < logits.rows(); ++i) {
            const double* row = logits.row(i);
            std::size_t best = 0;
            for (std::size_t j = 1; j < logits.cols(); ++j)
                if (row[j] > row[best]) best = j;
            if (static_cast<int>(best) == ds.labels[start + i]) ++hits;
        }
    }
    return ds.images.rows() == 0
               ? 0.0
               : static_cast<double>(hits) / static_cast<double>(ds.images.rows());
}

MetricsRecord train_cell(const AblationConfig& cfg, const Cell& cell, const TrainTest& data) {
    const auto t0 = std::chrono::steady_clock::now();
    MetricsRecord rec;
    rec.axis = axis_name(cfg.axis.tag);
    rec.axis_value = cell.axis_value;
    rec.activation = tag_name(cell.activation);
    rec.seed = cell.seed;

    const std::size_t classes =
        1 + static_cast<std::size_t>(
                *std::max_element(data.train.labels.begin(), data.train.labels.end()));
    Network net(cell_network_spec(cfg, cell, data.train.images.cols(), classes));
    Optimizer opt(cell_optimizer(cfg, cell));
    const std::size_t batch_size = cell_batch_size(cfg, cell);
    Rng dropout_rng(cell.seed, kDropoutStream);

    const std::size_t n = data.train.images.rows();
    const std::size_t dim = data.train.images.cols();
    bool diverged = false;
    double last_epoch_loss = std::numeric_limits<double>::quiet_NaN();
    std::size_t completed = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs && !diverged; ++epoch) {
        double loss_sum = 0.0;
        std::size_t batches_done = 0;
        for (const auto& idx : batches(n, batch_size, cell.seed, epoch)) {
            Tensor2 xb(idx.size(), dim);
            std::vector<int> yb(idx.size());
            for (std::size_t r = 0; r < idx.size(); ++r) {
                std::memcpy(xb.row(r), data.train.images.row(idx[r]), dim * sizeof(double));
                yb[r] = data.train.labels[idx[r]];
            }
            ForwardCache cache;
            const Tensor2 logits = net.forward(xb, Mode::train, dropout_rng, &cache);
            const SoftmaxCeResult ce = loss_softmax_ce(logits, yb);
            if (!std::isfinite(ce.loss)) {
                diverged = true;
                break;
            }
            loss_sum += ce.loss;
            ++batches_done;
            const std::vector<Tensor2> grads = net.backward(cache, ce.dlogits);
            opt.step(net.params(), grad_ptrs(grads));
        }
        if (!diverged) {
            last_epoch_loss = loss_sum / static_cast<double>(batches_done);
            ++completed;
        }
    }

    rec.epochs = completed;
    if (diverged) {
        rec.status = "diverged";
        rec.accuracy = 0.0;
        rec.final_train_loss = std::numeric_limits<double>::quiet_NaN();
    } else {
        rec.status = "ok";
        rec.accuracy = evaluate_accuracy(net, data.test);
        rec.final_train_loss = last_epoch_loss;
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_record_double(const std::string& path, std::size_t line, const std::string& token) {
    if (token == "nan" || token == "-nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        throw ParseError(path + ":" + std::to_string(line) + ": bad number '" + token + "'");
    }
    return v;
}

bool loss_equal(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return a == b;
}

}  // namespace

const char* axis_name(AxisTag tag) {
    switch (tag) {
        case AxisTag::dense_units: return "dense_units";
        case AxisTag::dropout_rates: return "dropout_rates";
        case AxisTag::initializers: return "initializers";
        case AxisTag::learning_rates: return "learning_rates";
        case AxisTag::optimizers: return "optimizers";
        case AxisTag::num_layers: return "num_layers";
        case AxisTag::batch_sizes: return "batch_sizes";
    }
    return "?";
}

std::optional<AxisTag> parse_axis_tag(std::string_view name) {
    if (name == "dense_units") return AxisTag::dense_units;
    if (name == "dropout_rates") return AxisTag::dropout_rates;
    if (name == "initializers") return AxisTag::initializers;
    if (name == "learning_rates") return AxisTag::learning_rates;
    if (name == "optimizers") return AxisTag::optimizers;
    if (name == "num_layers") return AxisTag::num_layers;
    if (name == "batch_sizes") return AxisTag::batch_sizes;
    return std::nullopt;
}

AblationConfig parse_ablation_config_text(const std::string& text, const std::string& source) {
    AblationConfig cfg;
    cfg.axis.values.clear();
    bool axis_tag_seen = false;
    std::vector<std::pair<std::size_t, std::string>> pending_axis_values;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') config_error(source, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "axis" && section != "network" && section != "train" &&
                section != "dataset" && section != "output") {
                config_error(source, lineno, "unknown section [" + section + "]");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) config_error(source, lineno, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) config_error(source, lineno, "expected key=value");
        if (section.empty()) config_error(source, lineno, "key outside any [section]");

        if (section == "axis") {
            if (key == "tag") {
                const auto tag = parse_axis_tag(value);
                if (!tag) config_error(source, lineno, "unknown axis tag '" + value + "'");
                cfg.axis.tag = *tag;
                axis_tag_seen = true;
            } else if (key == "values") {
                for (const std::string& token : split_list(value)) {
                    pending_axis_values.emplace_back(lineno, token);
                }
            } else {
                config_error(source, lineno, "unknown key '" + key + "' in [axis]");
            }
        } else if (section == "network") {
            if (key == "hidden_width") {
                cfg.hidden_width = parse_u64_or(source, lineno, value);
                if (cfg.hidden_width < 1) config_error(source, lineno, "hidden_width must be >= 1");
            } else if (key == "hidden_layers") {
                cfg.hidden_layers = parse_u64_or(source, lineno, value);
                if (cfg.hidden_layers < 1) config_error(source, lineno, "hidden_layers must be >= 1");
            } else if (key == "batch_norm") {
                cfg.batch_norm = parse_bool_or(source, lineno, value);
            } else if (key == "dropout") {
                cfg.dropout = parse_double_or(source, lineno, value);
                if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) {
                    config_error(source, lineno, "dropout must lie in [0, 1)");
                }
            } else if (key == "initializer") {
                const auto tag = parse_init_tag(value);
                if (!tag) config_error(source, lineno, "unknown initializer '" + value + "'");
                cfg.initializer = make_initializer(*tag);
            } else if (key == "activations") {
                cfg.activations.clear();
                for (const std::string& token : split_list(value)) {
                    const auto tag = parse_activation_tag(token);
                    if (!tag) config_error(source, lineno, "unknown activation '" + token + "'");
                    cfg.activations.push_back(*tag);
                }
                if (cfg.activations.empty()) config_error(source, lineno, "activations list is empty");
            } else {
                config_error(source, lineno, "unknown key '" + key + "' in [network]");
            }
        } else if (section == "train") {
            if (key == "epochs") {
                cfg.epochs = parse_u64_or(source, lineno, value);
                if (cfg.epochs < 1) config_error(source, lineno, "epochs must be >= 1");
            } else if (key == "batch_size") {
                cfg.batch_size = parse_u64_or(source, lineno, value);
                if (cfg.batch_size < 1) config_error(source, lineno, "batch_size must be >= 1");
            } else if (key == "optimizer") {
                const auto tag = parse_optim_tag(value);
                if (!tag) config_error(source, lineno, "unknown optimizer '" + value + "'");
                cfg.optimizer = *tag;
            } else if (key == "learning_rate") {
                cfg.learning_rate = parse_double_or(source, lineno, value);
                if (!(cfg.learning_rate > 0.0)) {
                    config_error(source, lineno, "learning_rate must be positive");
                }
            } else if (key == "seeds") {
                cfg.seeds.clear();
                for (const std::string& token : split_list(value)) {
                    cfg.seeds.push_back(parse_u64_or(source, lineno, token));
                }
                if (cfg.seeds.empty()) config_error(source, lineno, "seeds list is empty");
            } else {
                config_error(source, lineno, "unknown key '" + key + "' in [train]");
            }
        } else if (section == "dataset") {
            if (key == "source") {
                if (value != "synthetic" && value != "mnist" && value != "auto") {
                    config_error(source, lineno,
                                 "dataset source must be synthetic, mnist, or auto");
                }
                cfg.dataset = value;
            } else if (key == "standardize") {
                cfg.standardize = parse_bool_or(source, lineno, value);
            } else {
                config_error(source, lineno, "unknown key '" + key + "' in [dataset]");
            }
        } else {  // output
            if (key == "records") {
                cfg.records_path = value;
            } else if (key == "workers") {
                cfg.workers = parse_u64_or(source, lineno, value);
                if (cfg.workers < 1) config_error(source, lineno, "workers must be >= 1");
            } else {
                config_error(source, lineno, "unknown key '" + key + "' in [output]");
            }
        }
    }

    if (!axis_tag_seen) config_error(source, lineno, "missing [axis] tag");
    if (pending_axis_values.empty()) config_error(source, lineno, "missing [axis] values");
    for (const auto& [vline, token] : pending_axis_values) {
        validate_axis_value(source, vline, cfg.axis.tag, token);
        cfg.axis.values.push_back(token);
    }
    return cfg;
}

AblationConfig load_ablation_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ablation_config_text(buf.str(), path);
}

bool operator==(const MetricsRecord& a, const MetricsRecord& b) {
    return records_equivalent(a, b) && a.wall_seconds == b.wall_seconds;
}

bool records_equivalent(const MetricsRecord& a, const MetricsRecord& b) {
    return a.axis == b.axis && a.axis_value == b.axis_value && a.activation == b.activation &&
           a.seed == b.seed && a.status == b.status && a.accuracy == b.accuracy &&
           loss_equal(a.final_train_loss, b.final_train_loss) && a.epochs == b.epochs;
}

std::string record_to_csv_line(const MetricsRecord& r) {
    std::ostringstream out;
    out << r.axis << ',' << r.axis_value << ',' << r.activation << ',' << r.seed << ','
        << r.status << ',' << format_double(r.accuracy) << ','
        << format_double(r.final_train_loss) << ',' << r.epochs << ','
        << format_double(r.wall_seconds);
    return out.str();
}

void write_records_csv(const std::string& path, const std::vector<MetricsRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << kRecordsSchema << '\n' << kRecordsHeader << '\n';
    for (const MetricsRecord& r : records) out << record_to_csv_line(r) << '\n';
    if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<MetricsRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;

    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) {
            throw ParseError(path + ":" + std::to_string(lineno + 1) + ": missing " + what);
        }
        ++lineno;
    };
    next_line("schema line");
    if (line != kRecordsSchema) {
        throw ParseError(path + ":1: unsupported schema '" + line + "', expected '" +
                         kRecordsSchema + "'");
    }
    next_line("column header");
    if (line != kRecordsHeader) {
        throw ParseError(path + ":2: unexpected column header");
    }

    std::vector<MetricsRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        std::istringstream row(line);
        while (std::getline(row, cur, ',')) fields.push_back(cur);
        if (fields.size() != 9) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 9 fields, got " +
                             std::to_string(fields.size()));
        }
        MetricsRecord r;
        r.axis = fields[0];
        r.axis_value = fields[1];
        r.activation = fields[2];
        r.seed = parse_u64_or(path, lineno, fields[3]);
        r.status = fields[4];
        if (r.status != "ok" && r.status != "diverged") {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad status '" + r.status +
                             "'");
        }
        r.accuracy = parse_record_double(path, lineno, fields[5]);
        r.final_train_loss = parse_record_double(path, lineno, fields[6]);
        r.epochs = parse_u64_or(path, lineno, fields[7]);
        r.wall_seconds = parse_record_double(path, lineno, fields[8]);
        if (!(r.accuracy >= 0.0 && r.accuracy <= 1.0)) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": accuracy " +
                             fields[5] + " outside [0,1]");
        }
        records.push_back(std::move(r));
    }
    return records;
}

TrainTest load_harness_data(const AblationConfig& config) {
    auto synthetic = [] {
        TrainTest tt;
        tt.train = synthetic_blobs(kSyntheticClasses, kSyntheticTrainPerClass, kSyntheticDim,
                                   kSyntheticTrainSeed);
        tt.test = synthetic_blobs(kSyntheticClasses, kSyntheticTestPerClass, kSyntheticDim,
                                  kSyntheticTestSeed);
        return tt;
    };
    TrainTest tt;
    if (config.dataset == "synthetic") {
        tt = synthetic();
    } else {
        const auto dir = dataset_cache_dir();
        std::optional<TrainTest> mnist;
        if (dir) mnist = try_load_mnist(*dir);
        if (mnist) {
            tt = std::move(*mnist);
        } else if (config.dataset == "mnist") {
            throw ParseError("mnist requested but not found under SERF_DATA_DIR");
        } else {
            tt = synthetic();
        }
    }
    if (config.standardize) standardize_features(tt.train, &tt.test);
    return tt;
}

std::vector<MetricsRecord> run_ablation(const AblationConfig& config, const std::string& out_dir) {
    const TrainTest data = load_harness_data(config);
    if (data.train.images.rows() == 0) throw std::invalid_argument("training set is empty");

    std::vector<Cell> cells;
    for (const std::string& value : config.axis.values) {
        for (ActivationTag act : config.activations) {
            for (std::uint64_t seed : config.seeds) {
                cells.push_back(Cell{value, act, seed});
            }
        }
    }

    const std::string path =
        out_dir.empty() ? config.records_path : out_dir + "/" + config.records_path;
    std::ofstream append_out(path);
    if (!append_out) throw std::runtime_error("cannot open " + path + " for writing");
    append_out << kRecordsSchema << '\n' << kRecordsHeader << '\n';
    append_out.flush();

    std::vector<MetricsRecord> records(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex sink;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            MetricsRecord rec = train_cell(config, cells[i], data);
            std::lock_guard<std::mutex> lock(sink);
            append_out << record_to_csv_line(rec) << '\n';
            append_out.flush();
            records[i] = std::move(rec);
        }
    };

    const std::size_t nworkers = std::max<std::size_t>(
        1, std::min(config.workers, cells.empty() ? std::size_t{1} : cells.size()));
    if (nworkers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    append_out.close();

    // Canonical grid order on disk once the sweep is complete.
    write_records_csv(path, records);
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize needs at least one record");
    std::vector<SummaryRow> rows;
    std::vector<std::vector<double>> ok_values;
    auto find_row = [&](const MetricsRecord& r) -> std::size_t {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].axis == r.axis && rows[i].axis_value == r.axis_value &&
                rows[i].activation == r.activation) {
                return i;
            }
        }
        SummaryRow row;
        row.axis = r.axis;
        row.axis_value = r.axis_value;
        row.activation = r.activation;
        rows.push_back(row);
        ok_values.emplace_back();
        return rows.size() - 1;
    };
    for (const MetricsRecord& r : records) {
        const std::size_t i = find_row(r);
        if (r.status == "diverged") {
            ++rows[i].diverged;
        } else {
            ++rows[i].runs;
            ok_values[i].push_back(r.accuracy);
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (ok_values[i].empty()) {
            rows[i].mean_accuracy = std::numeric_limits<double>::quiet_NaN();
            rows[i].std_accuracy = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        double mean = 0.0;
        for (double v : ok_values[i]) mean += v;
        mean /= static_cast<double>(ok_values[i].size());
        double var = 0.0;
        for (double v : ok_values[i]) var += (v - mean) * (v - mean);
        var /= static_cast<double>(ok_values[i].size());
        rows[i].mean_accuracy = mean;
        rows[i].std_accuracy = std::sqrt(var);
    }
    return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "axis,axis_value,activation,runs,diverged,mean_accuracy,std_accuracy\n";
    for (const SummaryRow& r : rows) {
        out << r.axis << ',' << r.axis_value << ',' << r.activation << ',' << r.runs << ','
            << r.diverged << ',' << format_double(r.mean_accuracy) << ','
            << format_double(r.std_accuracy) << '\n';
    }
    return out.str();
}

std::string summary_text(const std::vector<SummaryRow>& rows) {
    std::vector<std::array<std::string, 6>> cells;
    cells.push_back({"axis", "value", "activation", "runs", "accuracy (mean +/- std)",
                     "diverged"});
    for (const SummaryRow& r : rows) {
        char acc[64];
        if (r.runs == 0) {
            std::snprintf(acc, sizeof acc, "-");
        } else {
            std::snprintf(acc, sizeof acc, "%.6f +/- %.6f", r.mean_accuracy, r.std_accuracy);
        }
        cells.push_back({r.axis, r.axis_value, r.activation, std::to_string(r.runs),
                         std::string(acc), std::to_string(r.diverged)});
    }
    std::array<std::size_t, 6> width{};
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 6; ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 6; ++c) {
            out << row[c];
            if (c + 1 < 6) out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace serf
