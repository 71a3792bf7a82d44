#include "pucycle/evaluate.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pucycle {

namespace {

// Per-sequence work fanned out over hardware threads, merged in sequence
// order — results are identical to the serial pass regardless of core count.
template <typename Fn>
std::vector<double> pooled_errors(std::size_t n, Fn&& per_sequence) {
    std::vector<std::vector<double>> per(n);
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) per[i] = per_sequence(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto drain = [&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                per[i] = per_sequence(i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
        drain();
        for (std::thread& th : pool) th.join();
    }
    std::vector<double> flat;
    for (const std::vector<double>& v : per) flat.insert(flat.end(), v.begin(), v.end());
    return flat;
}

}  // namespace

std::pair<double, double> evaluate_cycle(const SequenceNet& pred, const SequenceNet& up,
                                         const std::vector<ObservedSequence>& eval_set,
                                         const CycleConfig& ccfg) {
    if (eval_set.empty()) throw std::invalid_argument("evaluate_cycle: empty eval set");
    std::vector<double> errors = pooled_errors(eval_set.size(), [&](std::size_t i) {
        const ObservedSequence& seq = eval_set[i];
        const FilterTrace trace = run_cycle(pred, up, seq, ccfg);
        std::vector<double> e(trace.steps.size());
        for (std::size_t k = 0; k < trace.steps.size(); ++k) {
            e[k] = (trace.steps[k].posterior.mean - seq.gt.positions[k]).norm();
        }
        return e;
    });
    return mean_and_population_std(errors);
}

std::pair<double, double> evaluate_one_to_one(const SequenceNet& net, const SequenceNet& imputer,
                                              const std::vector<ObservedSequence>& eval_set) {
    if (eval_set.empty()) throw std::invalid_argument("evaluate_one_to_one: empty eval set");
    std::vector<double> errors = pooled_errors(eval_set.size(), [&](std::size_t i) {
        const ObservedSequence& seq = eval_set[i];
        const std::vector<Vec2> values = impute_with_prediction(seq, imputer);
        const std::vector<Gaussian2D> est = one_to_one_forward(net, values);
        std::vector<double> e(est.size());
        for (std::size_t k = 0; k < est.size(); ++k) {
            e[k] = (est[k].mean - seq.gt.positions[k]).norm();
        }
        return e;
    });
    return mean_and_population_std(errors);
}

std::pair<double, double> evaluate_encoder(const SequenceNet& net, const SequenceNet& imputer,
                                           const std::vector<ObservedSequence>& eval_set) {
    if (eval_set.empty()) throw std::invalid_argument("evaluate_encoder: empty eval set");
    std::vector<double> errors = pooled_errors(eval_set.size(), [&](std::size_t i) {
        const ObservedSequence& seq = eval_set[i];
        const std::vector<Vec2> values = impute_with_prediction(seq, imputer);
        const Gaussian2D est = encoder_forward(net, values);
        return std::vector<double>{(est.mean - seq.gt.positions.back()).norm()};
    });
    return mean_and_population_std(errors);
}

std::vector<ResultCell> evaluate_condition(const SequenceNet& pred, const SequenceNet& up,
                                           const SequenceNet& one_to_one, const SequenceNet& encoder,
                                           const SequenceNet& imputer,
                                           const std::vector<ObservedSequence>& eval_set,
                                           const CycleConfig& ccfg, double p_miss, double p_outl,
                                           double sigma_w) {
    std::vector<ResultCell> cells;
    auto add = [&](const char* model, std::pair<double, double> r) {
        cells.push_back({p_miss, p_outl, sigma_w, model, r.first, r.second});
    };
    add("cycle", evaluate_cycle(pred, up, eval_set, ccfg));
    add("one_to_one", evaluate_one_to_one(one_to_one, imputer, eval_set));
    add("encoder", evaluate_encoder(encoder, imputer, eval_set));
    return cells;
}

std::vector<double> gap_errors(const std::vector<Vec2>& values, const ObservedSequence& seq) {
    if (values.size() != seq.gt.positions.size()) {
        throw std::invalid_argument("gap_errors: length mismatch");
    }
    std::vector<double> errors;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (seq.mask[k] == 0) {
            errors.push_back((values[k] - seq.gt.positions[k]).norm());
        }
    }
    return errors;
}

void save_report_csv(const std::vector<ResultCell>& cells, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_report_csv: cannot open " + path);
    out << "p_miss,p_outl,sigma_w,model,ade_m,sigma_ade_m\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const ResultCell& c : cells) {
        out << num(c.p_miss) << ',' << num(c.p_outl) << ',' << num(c.sigma_w) << ','
            << c.model << ',' << num(c.ade_m) << ',' << num(c.sigma_ade_m) << '\n';
    }
    if (!out) throw std::runtime_error("save_report_csv: write failed for " + path);
}

std::vector<ResultCell> load_report_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_report_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_report_csv: empty file " + path);
    std::vector<ResultCell> cells;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        ResultCell c;
        std::string field;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) {
                throw std::runtime_error("load_report_csv: short row in " + path);
            }
            return field;
        };
        c.p_miss = std::stod(next());
        c.p_outl = std::stod(next());
        c.sigma_w = std::stod(next());
        c.model = next();
        c.ade_m = std::stod(next());
        c.sigma_ade_m = std::stod(next());
        cells.push_back(std::move(c));
    }
    return cells;
}

}  // namespace pucycle
