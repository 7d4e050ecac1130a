#pragma once

// Subcommand implementations behind the command-line tool. Everything here
// writes deterministic output: the same inputs and flags produce the same
// bytes. Machine-readable output is one JSON object per line and round-trips
// through the parse_* helpers below.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "comonads.hpp"
#include "games.hpp"
#include "hintikka.hpp"
#include "io.hpp"
#include "logic.hpp"
#include "structures.hpp"

namespace bfg {

struct RunConfig {
    enum class Format { Human, JsonLines };

    std::string subcommand;
    ComonadSpec spec;
    int rank = 0;
    int budget = 4096;
    std::vector<std::string> inputs;
    std::optional<std::pair<int, int>> position;
    std::optional<int> node;                  // hintikka: left path node
    std::optional<std::string> shape_file;    // hintikka: target shape (a chain forest file)
    Format format = Format::Human;
    unsigned seed = 0;
    int max_size = 3;
    int samples = 25;                          // per size above the exhaustive range
    std::string out_dir;
};

// exit code protocol shared with the acceptance harness
inline constexpr int exit_duplicator = 0;
inline constexpr int exit_spoiler = 1;
inline constexpr int exit_error = 2;
inline constexpr int exit_oracle_mismatch = 3;

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Structure load_structure(const std::string& path) {
    try {
        return parse_structure(read_file(path));
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

inline nlohmann::json play_json(const Unravelling& u, const PathTree& t, int node) {
    nlohmann::json j = nlohmann::json::array();
    if (t.element[static_cast<std::size_t>(node)])
        for (int e : u.plays[static_cast<std::size_t>(*t.element[static_cast<std::size_t>(node)])])
            j.push_back(e);
    return j;
}

}  // namespace cli_detail

struct GameLine {
    int left = 0, right = 0;
    bool winning = false, top = false;
    int rank = 0;
};

struct GameReport {
    std::string winner;
    int stabilization_rank = 0;
    std::vector<GameLine> positions;
};

/// Parse the json-lines output of `game` back into a report.
inline GameReport parse_game_lines(const std::string& text) {
    GameReport rep;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        std::string kind = j.value("kind", std::string());
        if (kind == "position") {
            GameLine g;
            g.left = j["left"].get<int>();
            g.right = j["right"].get<int>();
            g.winning = j["winning"].get<bool>();
            g.top = j["top"].get<bool>();
            g.rank = j.value("rank", 0);
            rep.positions.push_back(g);
        } else if (kind == "verdict") {
            rep.winner = j["winner"].get<std::string>();
            rep.stabilization_rank = j["stabilization_rank"].get<int>();
        }
    }
    return rep;
}

inline int cmd_game(const RunConfig& cfg, std::ostream& out) {
    if (cfg.inputs.size() != 2) throw error("game needs exactly two structure files");
    Structure A = cli_detail::load_structure(cfg.inputs[0]);
    Structure B = cli_detail::load_structure(cfg.inputs[1]);
    Unravelling ua = unravel(cfg.spec, A), ub = unravel(cfg.spec, B);
    GameAnalysis g = analyze_game(ua.forest, ub.forest);
    const Rank& root = g.at(g.root_position());
    bool duplicator = root.top;

    if (cfg.format == RunConfig::Format::JsonLines) {
        for (int side = 0; side < 2; ++side) {
            const PathTree& t = side == 0 ? g.ta : g.tb;
            const Unravelling& u = side == 0 ? ua : ub;
            for (int n = 0; n < t.size(); ++n) {
                nlohmann::json j;
                j["kind"] = "node";
                j["side"] = side == 0 ? "left" : "right";
                j["node"] = n;
                j["parent"] = t.parent[static_cast<std::size_t>(n)];
                j["play"] = cli_detail::play_json(u, t, n);
                out << j.dump() << '\n';
            }
        }
        for (int i = 0; i < g.table.na; ++i)
            for (int j = 0; j < g.table.nb; ++j) {
                const Rank& r = g.table.at(i, j);
                nlohmann::json o;
                o["kind"] = "position";
                o["left"] = i;
                o["right"] = j;
                o["winning"] = r.winning;
                o["top"] = r.top;
                if (r.winning && !r.top) o["rank"] = r.value;
                out << o.dump() << '\n';
            }
        nlohmann::json v;
        v["kind"] = "verdict";
        v["winner"] = duplicator ? "duplicator" : "spoiler";
        v["stabilization_rank"] = g.table.stabilization_rank;
        if (cfg.position) {
            const Rank& r = g.table.at(cfg.position->first, cfg.position->second);
            v["position_top"] = r.top;
        }
        out << v.dump() << '\n';
    } else {
        out << (duplicator ? "Duplicator" : "Spoiler") << " wins from the roots\n";
        out << "stabilization rank: " << g.table.stabilization_rank << "\n";
        if (cfg.position) {
            const Rank& r = g.table.at(cfg.position->first, cfg.position->second);
            out << "position (" << cfg.position->first << "," << cfg.position->second
                << "): " << (r.top ? "Duplicator" : "Spoiler") << "\n";
        }
        out << "left path tree against right nodes (top positions):\n";
        // indented left tree; each node lists the right nodes it pairs with
        std::vector<int> stack{0};
        std::vector<int> indent{0};
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            int ind = indent.back();
            indent.pop_back();
            out << std::string(static_cast<std::size_t>(ind) * 2, ' ') << "node " << n << " [";
            nlohmann::json play = cli_detail::play_json(ua, g.ta, n);
            out << play.dump() << "] ~ {";
            bool first = true;
            for (int j = 0; j < g.table.nb; ++j)
                if (g.table.at(n, j).top) {
                    if (!first) out << ",";
                    out << j;
                    first = false;
                }
            out << "}\n";
            const auto& kids = g.ta.children[static_cast<std::size_t>(n)];
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
                stack.push_back(*it);
                indent.push_back(ind + 1);
            }
        }
    }
    return duplicator ? exit_duplicator : exit_spoiler;
}

/// Parse a path shape from a forest file that must be a chain.
inline ChainShape shape_from_forest_file(const std::string& path) {
    ForestStructure f = parse_forest(cli_detail::read_file(path));
    if (!is_path(f)) throw error(path + ": shape file must be a chain");
    PathNode deepest{std::nullopt};
    for (int v = 0; v < f.carrier.size; ++v)
        if (!deepest.element || f.depth(v) > f.depth(*deepest.element)) deepest = PathNode{v};
    return chain_shape(f, deepest);
}

inline int cmd_hintikka(const RunConfig& cfg, std::ostream& out) {
    if (cfg.inputs.size() != 1) throw error("hintikka needs exactly one structure file");
    Structure M = cli_detail::load_structure(cfg.inputs[0]);
    FormulaPtr f;
    if (cfg.node) {
        HintikkaSynthesizer synth(cfg.spec, M);
        PathNode node{*cfg.node};
        if (cfg.shape_file) f = synth.theta_against(node, shape_from_forest_file(*cfg.shape_file), cfg.rank);
        else f = synth.theta_at(node, cfg.rank);
    } else {
        f = root_hintikka_sentence(cfg.spec, M, cfg.rank);
    }
    if (cfg.format == RunConfig::Format::JsonLines) {
        nlohmann::json j;
        j["kind"] = "formula";
        j["rank"] = cfg.rank;
        j["formula"] = to_sexpr(f);
        out << j.dump() << '\n';
    } else {
        out << to_sexpr(f) << '\n';
    }
    return exit_duplicator;
}

inline int cmd_distinguish(const RunConfig& cfg, std::ostream& out) {
    if (cfg.inputs.size() != 2) throw error("distinguish needs exactly two structure files");
    Structure M = cli_detail::load_structure(cfg.inputs[0]);
    Structure N = cli_detail::load_structure(cfg.inputs[1]);
    auto d = distinguishing_sentence(cfg.spec, M, N);
    if (cfg.format == RunConfig::Format::JsonLines) {
        nlohmann::json j;
        j["kind"] = "distinguish";
        j["equivalent"] = !d.has_value();
        if (d) {
            j["rank"] = d->rank;
            j["formula"] = to_sexpr(d->sentence);
        }
        out << j.dump() << '\n';
    } else {
        if (!d) out << "equivalent\n";
        else out << "distinguished at rank " << d->rank << ":\n" << to_sexpr(d->sentence) << '\n';
    }
    return d ? exit_spoiler : exit_duplicator;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    if (cfg.inputs.size() != 2) throw error("oracle needs exactly two structure files");
    Structure M = cli_detail::load_structure(cfg.inputs[0]);
    Structure N = cli_detail::load_structure(cfg.inputs[1]);
    OracleResult o = rank_k_equivalent_oracle(M, N, cfg.spec.k, cfg.budget);
    if (o.verdict == OracleResult::Verdict::BudgetExhausted) {
        out << "budget exhausted\n";
        return exit_error;
    }
    ComonadSpec game_spec{ComonadKind::EF, cfg.spec.k, true, std::nullopt};
    bool game_eq = r_equivalent(M, N, game_spec);
    bool oracle_eq = o.verdict == OracleResult::Verdict::Equivalent;

    if (cfg.format == RunConfig::Format::JsonLines) {
        nlohmann::json j;
        j["kind"] = "oracle";
        j["equivalent"] = oracle_eq;
        j["game_equivalent"] = game_eq;
        if (!oracle_eq) {
            j["rank"] = o.rank;
            j["formula"] = to_sexpr(o.sentence);
        }
        out << j.dump() << '\n';
    } else {
        out << (oracle_eq ? "equivalent within budget" : "distinguished at rank " + std::to_string(o.rank))
            << '\n';
        if (!oracle_eq) out << to_sexpr(o.sentence) << '\n';
        out << "game verdict: " << (game_eq ? "equivalent" : "inequivalent") << '\n';
    }
    if (game_eq != oracle_eq) {
        out << "ORACLE MISMATCH\n";
        return exit_oracle_mismatch;
    }
    return oracle_eq ? exit_duplicator : exit_spoiler;
}

inline int cmd_corpus(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out_dir.empty()) throw error("corpus needs --out-dir");
    std::filesystem::create_directories(cfg.out_dir);
    Signature sig = make_signature({{"R", 2}});
    int written = 0;
    auto emit = [&](const Structure& m, int size, int index) {
        std::ostringstream name;
        name << "s" << size << "_" << std::setw(4) << std::setfill('0') << index << ".json";
        std::ofstream f(std::filesystem::path(cfg.out_dir) / name.str(), std::ios::binary);
        f << serialize_structure(m) << '\n';
        ++written;
    };
    std::mt19937 rng(cfg.seed);
    for (int n = 0; n <= cfg.max_size; ++n) {
        long bits = static_cast<long>(n) * n;
        if (n <= 3) {
            // exhaustive below four elements
            for (long mask = 0; mask < (1L << bits); ++mask) {
                Structure m;
                m.sig = sig;
                m.size = n;
                m.tables.resize(1);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (mask & (1L << (i * n + j))) m.tables[0].insert({i, j});
                emit(m, n, static_cast<int>(mask));
            }
        } else {
            for (int s = 0; s < cfg.samples; ++s) {
                Structure m;
                m.sig = sig;
                m.size = n;
                m.tables.resize(1);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (rng() & 1u) m.tables[0].insert({i, j});
                emit(m, n, s);
            }
        }
    }
    out << "wrote " << written << " structures to " << cfg.out_dir << '\n';
    return exit_duplicator;
}

}  // namespace bfg
