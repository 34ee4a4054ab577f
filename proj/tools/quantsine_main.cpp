#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "quantsine/experiments.hpp"

namespace {

std::string experiment_footer() {
    std::ostringstream os;
    os << "Experiments:\n";
    for (const auto& line : quantsine::list_experiments()) os << "  " << line << "\n";
    os << "\nOther commands:\n"
       << "  list    print the experiment ids\n"
       << "  verify  run the self-check suite (--suite fast|full)\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "quantsine: exact and simulated statistics of least-squares amplitude\n"
        "estimation for quantized sine records with random initial phase"};
    app.footer(experiment_footer());

    std::string command;
    app.add_option("command", command, "experiment id, 'list' or 'verify'")->required();

    std::optional<int> bits, amp_steps, lambda, n_samples;
    std::optional<double> delta, amp_min, amp_max, sigma, offset;
    std::optional<std::int64_t> records;
    std::optional<std::uint64_t> seed;
    std::string config_path, out_path, suite = "fast";

    app.add_option("--bits", bits, "quantizer bit depth (delta = 2/2^bits)");
    app.add_option("--delta", delta, "quantizer step, overrides --bits");
    app.add_option("--amp-min", amp_min, "low end of the amplitude grid");
    app.add_option("--amp-max", amp_max, "high end of the amplitude grid");
    app.add_option("--amp-steps", amp_steps, "number of amplitude grid points");
    app.add_option("--lambda", lambda, "periods per record");
    app.add_option("--n", n_samples, "samples per record");
    app.add_option("--records", records, "Monte Carlo replicates (0 disables MC columns)");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--sigma", sigma, "pre-quantization Gaussian noise level");
    app.add_option("--offset", offset, "additive signal offset");
    app.add_option("--config", config_path, "key=value file applied before the flags");
    app.add_option("--out", out_path, "output CSV path, '-' for stdout");
    app.add_option("--suite", suite, "verify suite")
        ->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (command == "list") {
            for (const auto& line : quantsine::list_experiments())
                std::cout << line << "\n";
            return 0;
        }
        if (command == "verify") {
            return quantsine::verify(suite, std::cout) ? 0 : 1;
        }

        quantsine::ExperimentConfig cfg;
        if (!config_path.empty()) {
            // a previously written sweep works as a config; its first line is
            // always '# experiment=...', a plain key=value file never is
            std::ifstream probe(config_path);
            if (!probe)
                throw std::runtime_error("cannot open config file: " + config_path);
            std::string first;
            std::getline(probe, first);
            if (first.rfind("# experiment=", 0) == 0) {
                probe.seekg(0);
                cfg = quantsine::config_from_csv_metadata(probe);
            } else {
                probe.close();
                quantsine::load_config_file(cfg, config_path);
            }
        }
        cfg.experiment = command;
        if (bits) cfg.bits = bits;
        if (delta) cfg.delta = delta;
        if (amp_min) cfg.amp_min = amp_min;
        if (amp_max) cfg.amp_max = amp_max;
        if (amp_steps) cfg.amp_steps = amp_steps;
        if (lambda) cfg.lambda = lambda;
        if (n_samples) cfg.n_samples = n_samples;
        if (records) cfg.records = records;
        if (seed) cfg.seed = seed;
        if (sigma) cfg.sigma = sigma;
        if (offset) cfg.offset = offset;
        if (!out_path.empty()) cfg.out = out_path;

        const quantsine::SweepTable table = quantsine::run_experiment(cfg);
        for (const auto& [k, v] : table.metadata)
            if (k == "warning") std::cerr << "warning: " << v << "\n";

        if (cfg.out == "-") {
            quantsine::write_csv(table, std::cout);
        } else {
            const std::string path = cfg.out.empty() ? command + ".csv" : cfg.out;
            std::ofstream os(path, std::ios::binary);
            if (!os) {
                std::cerr << "error: cannot open '" << path << "' for writing\n";
                return 2;
            }
            quantsine::write_csv(table, os);
            os.flush();
            if (!os) {
                std::cerr << "error: short write to '" << path << "'\n";
                return 2;
            }
            std::cerr << "wrote " << path << " (" << table.rows.size() << " rows)\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
