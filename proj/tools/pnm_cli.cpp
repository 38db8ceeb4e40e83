#include "pnm/errors.hpp"
#include "pnm/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

namespace
{
using namespace pnm;

// Every SimConfig key becomes a --key flag; --set key=value and --config files are applied first.
struct ConfigFlags
{
    std::vector< std::string >           files;
    std::vector< std::string >           sets;
    std::map< std::string, std::string > values;
    std::map< std::string, CLI::Option* > options;

    void attach(CLI::App* app)
    {
        app->add_option("--config", files, "key = value config file (repeat for several runs)")->check(CLI::ExistingFile);
        app->add_option("--set", sets, "key=value override");
        for (const auto& key : harness::config_keys())
            options[key] = app->add_option("--" + key, values[key], "config key " + key);
    }

    [[nodiscard]] harness::SimConfig apply(harness::SimConfig cfg) const
    {
        for (const auto& s : sets)
        {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + s + "'");
            harness::set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto& [key, opt] : options)
            if (opt->count() > 0)
                harness::set_config_value(cfg, key, values.at(key));
        return cfg;
    }

    [[nodiscard]] std::vector< harness::SimConfig > configs() const
    {
        std::vector< harness::SimConfig > out;
        if (files.empty())
            out.push_back(apply({}));
        for (const auto& f : files)
            out.push_back(apply(harness::load_config(f)));
        return out;
    }
};

std::vector< int > parse_ints(const std::string& s)
{
    std::vector< int > out;
    std::stringstream  ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        out.push_back(std::stoi(item));
    return out;
}

void with_output(const std::string& path, const std::function< void(std::ostream&) >& fn)
{
    if (path.empty() or path == "-")
    {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (not out)
        throw IoError("cannot open " + path + " for writing");
    fn(out);
}
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Phase-noise mitigation OFDM link simulator"};
    app.require_subcommand(1);

    // mse-table
    auto*       mse = app.add_subcommand("mse-table", "normalized codebook MSE grid, analytic and simulated");
    std::string mse_q = "2,3,4,5,6", mse_j = "2,4,5,8", mse_out;
    harness::MseTableConfig mse_cfg;
    mse->add_option("--q", mse_q, "comma-separated region counts");
    mse->add_option("--j", mse_j, "comma-separated segment counts");
    mse->add_option("--n-fft", mse_cfg.n_fft);
    mse->add_option("--realizations", mse_cfg.realizations);
    mse->add_option("--large-k", mse_cfg.large_k, "K from which --large-realizations applies");
    mse->add_option("--large-realizations", mse_cfg.large_realizations);
    mse->add_option("--seed", mse_cfg.seed);
    mse->add_option("--out", mse_out, "CSV output (default stdout)");

    // ber-sweep
    auto*       ber = app.add_subcommand("ber-sweep", "Monte-Carlo BER versus Eb/N0");
    ConfigFlags ber_flags;
    ber_flags.attach(ber);
    std::string ber_out, ber_plot;
    bool        ber_echo = false;
    ber->add_option("--out", ber_out, "CSV output (default stdout)");
    ber->add_option("--plot", ber_plot, "also write an SVG plot");
    ber->add_flag("--echo-config", ber_echo, "print the effective config to stderr");

    // codebook-export
    auto*       cbx = app.add_subcommand("codebook-export", "write a codebook file");
    int         cb_q = 3, cb_j = 4, cb_n = 64;
    double      cb_beta = 0.01;
    std::string cb_out;
    cbx->add_option("--q", cb_q);
    cbx->add_option("--j", cb_j);
    cbx->add_option("--n-fft", cb_n);
    cbx->add_option("--beta-t", cb_beta);
    cbx->add_option("--out", cb_out)->required();

    // ops-count
    auto*       ops = app.add_subcommand("ops-count", "closed-form and measured operation counts per OFDM symbol");
    ConfigFlags ops_flags;
    ops_flags.attach(ops);

    // plot
    auto*                      plt = app.add_subcommand("plot", "SVG plot of BER CSV files");
    std::vector< std::string > plot_in;
    std::string                plot_out, plot_title;
    plt->add_option("csv", plot_in)->required()->check(CLI::ExistingFile);
    plt->add_option("--out", plot_out)->required();
    plt->add_option("--title", plot_title);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (mse->parsed())
        {
            mse_cfg.q_values = parse_ints(mse_q);
            mse_cfg.j_values = parse_ints(mse_j);
            const auto cells = harness::run_mse(mse_cfg);
            with_output(mse_out, [&](std::ostream& os) { harness::write_mse_table(os, cells); });
        }
        else if (ber->parsed())
        {
            std::vector< harness::SimResult > results;
            for (const auto& cfg : ber_flags.configs())
            {
                if (ber_echo)
                    std::cerr << harness::config_text(cfg) << '\n';
                results.push_back(harness::run_ber(cfg));
            }
            with_output(ber_out, [&](std::ostream& os) { harness::write_csv(os, results); });
            if (not ber_plot.empty())
            {
                std::stringstream ss;
                harness::write_csv(ss, results);
                harness::emit_plot(harness::read_csv(ss), ber_plot);
            }
        }
        else if (cbx->parsed())
        {
            const double sigma = phn::WienerPhnParams{cb_beta, cb_n, 0}.sigma_eps_sq();
            codebook::save_codebook(cb_out, codebook::build_codebook(codebook::make_design(cb_n, cb_j, cb_q, sigma)));
        }
        else if (ops->parsed())
        {
            for (const auto& cfg : ops_flags.configs())
            {
                const auto rep = harness::count_ops(cfg);
                std::printf("K=%d N=%d iterations=%d\n", rep.k, rep.n_fft, rep.n_iters);
                std::printf("formula   mults=%llu adds=%llu\n", static_cast< unsigned long long >(rep.formula_mults),
                            static_cast< unsigned long long >(rep.formula_adds));
                std::printf("measured  mults=%.0f adds=%.0f (ratio %.3f / %.3f)\n", rep.measured_mults,
                            rep.measured_adds, rep.measured_mults / static_cast< double >(rep.formula_mults),
                            rep.measured_adds / static_cast< double >(rep.formula_adds));
            }
        }
        else if (plt->parsed())
        {
            std::vector< harness::CsvRow > rows;
            for (const auto& f : plot_in)
            {
                auto r = harness::read_csv(std::filesystem::path(f));
                rows.insert(rows.end(), r.begin(), r.end());
            }
            harness::emit_plot(rows, plot_out, plot_title);
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
