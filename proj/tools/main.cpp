#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bfgames/cli.hpp"

namespace {

void add_comonad_flags(CLI::App* cmd, bfg::RunConfig& cfg, std::string& comonad) {
    cmd->add_option("--comonad", comonad, "ef, pebble, or modal")->default_val("ef");
    cmd->add_option("--k", cfg.spec.k, "resource bound k")->default_val(1);
    cmd->add_flag("--with-identity", cfg.spec.with_identity,
                  "play over the identity-expanded signature");
    cmd->add_option("--play-bound", [&cfg](const CLI::results_t& res) {
        cfg.spec.play_bound = std::stoi(res[0]);
        return true;
    }, "pebble play length bound (default 2k)");
}

void add_format_flag(CLI::App* cmd, bfg::RunConfig& cfg, std::string& format) {
    cmd->add_option("--format", format, "human or json-lines")->default_val("human");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"model-comparison games on finite relational structures"};
    app.require_subcommand(1);

    bfg::RunConfig cfg;
    std::string comonad = "ef";
    std::string format = "human";
    std::string position;

    CLI::App* game = app.add_subcommand("game", "solve the back-and-forth game on two structures");
    add_comonad_flags(game, cfg, comonad);
    add_format_flag(game, cfg, format);
    game->add_option("--position", position, "report a specific position L,R");
    game->add_option("inputs", cfg.inputs, "two structure files")->expected(2);

    CLI::App* hintikka = app.add_subcommand("hintikka", "emit a rank-defining formula");
    add_comonad_flags(hintikka, cfg, comonad);
    add_format_flag(hintikka, cfg, format);
    hintikka->add_option("--rank", cfg.rank, "rank r")->required();
    hintikka->add_option("--node", [&cfg](const CLI::results_t& res) {
        cfg.node = std::stoi(res[0]);
        return true;
    }, "left path node (element id of the unravelling)");
    hintikka->add_option("--shape", [&cfg](const CLI::results_t& res) {
        cfg.shape_file = res[0];
        return true;
    }, "target path shape: a forest file that is a chain");
    hintikka->add_option("inputs", cfg.inputs, "one structure file")->expected(1);

    CLI::App* distinguish = app.add_subcommand("distinguish", "find a separating sentence");
    add_comonad_flags(distinguish, cfg, comonad);
    add_format_flag(distinguish, cfg, format);
    distinguish->add_option("inputs", cfg.inputs, "two structure files")->expected(2);

    CLI::App* oracle = app.add_subcommand("oracle", "formula-enumeration equivalence check");
    oracle->add_option("--k", cfg.spec.k, "quantifier rank bound")->default_val(2);
    oracle->add_option("--budget", cfg.budget, "enumeration budget")->default_val(4096);
    add_format_flag(oracle, cfg, format);
    oracle->add_option("inputs", cfg.inputs, "two structure files")->expected(2);

    CLI::App* corpus = app.add_subcommand("corpus", "generate structure files");
    corpus->add_option("--seed", cfg.seed, "sampling seed")->default_val(0);
    corpus->add_option("--max-size", cfg.max_size, "largest universe size")->default_val(3);
    corpus->add_option("--samples", cfg.samples, "samples per size above 3")->default_val(25);
    corpus->add_option("--out-dir", cfg.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.spec.kind = bfg::comonad_from_name(comonad);
        cfg.format = format == "json-lines" ? bfg::RunConfig::Format::JsonLines
                     : format == "human"    ? bfg::RunConfig::Format::Human
                                            : throw bfg::error("unknown format: " + format);
        if (!position.empty()) {
            auto comma = position.find(',');
            if (comma == std::string::npos) throw bfg::error("--position expects L,R");
            cfg.position = {std::stoi(position.substr(0, comma)), std::stoi(position.substr(comma + 1))};
        }
        cfg.spec.validate();

        if (game->parsed()) return bfg::cmd_game(cfg, std::cout);
        if (hintikka->parsed()) return bfg::cmd_hintikka(cfg, std::cout);
        if (distinguish->parsed()) return bfg::cmd_distinguish(cfg, std::cout);
        if (oracle->parsed()) return bfg::cmd_oracle(cfg, std::cout);
        if (corpus->parsed()) return bfg::cmd_corpus(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bfg::exit_error;
    }
    return bfg::exit_error;
}
