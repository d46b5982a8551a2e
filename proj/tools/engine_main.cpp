#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "story/engine.hpp"
#include "story/snapshot.hpp"

namespace fs = std::filesystem;
using story::Engine;
using story::Params;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw story::Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Params build_params(const std::string& config_path, const std::vector<std::string>& kvs) {
    Params p;
    if (!config_path.empty()) p.apply_config(read_file(config_path));
    for (const std::string& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw story::Error("--param expects key=value");
        p.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return p;
}

std::shared_ptr<const story::DomainLibrary> load_library(const std::string& path) {
    return std::make_shared<const story::DomainLibrary>(story::load_domain(read_file(path)));
}

// Runs one corpus file; parse errors are reported as file:line:col.
std::vector<story::StepRecord> run_file(Engine& engine, const std::string& path,
                                        std::size_t top_k) {
    story::xapi::Program program;
    try {
        program = story::xapi::parse_program(read_file(path));
    } catch (const story::ParseError& e) {
        throw story::Error(path + ":" + e.what());
    }
    try {
        return engine.run_program(program, top_k);
    } catch (const story::Error& e) {
        throw story::Error(path + ": " + e.what());
    }
}

nlohmann::json record_to_json(const story::StepRecord& rec) {
    nlohmann::json cont = nlohmann::json::array();
    for (const auto& t : rec.continuations)
        cont.push_back({{"template", t.rendered}, {"score", t.score}});
    nlohmann::json missing = nlohmann::json::array();
    for (const auto& t : rec.missing)
        missing.push_back({{"template", t.rendered}, {"score", t.score}});
    return {{"vi_id", rec.vi.v},       {"vi", rec.rendered},
            {"expectedness", rec.expectedness}, {"surprise", rec.surprise},
            {"continuations", cont},   {"missing", missing}};
}

int cmd_run(const std::string& domain, const std::vector<std::string>& autos,
            const std::string& story_path, const std::string& dump_dir,
            const Params& params, std::size_t top_k) {
    auto lib = load_library(domain);
    Engine engine(lib, params);

    for (const std::string& path : autos) {
        run_file(engine, path, 0);
        engine.flush_focus();
    }

    std::vector<story::StepRecord> records;
    if (!story_path.empty()) records = run_file(engine, story_path, top_k);

    if (!dump_dir.empty()) {
        fs::create_directories(dump_dir);
        std::ofstream out(fs::path(dump_dir) / "records.jsonl", std::ios::binary);
        for (const auto& rec : records) out << record_to_json(rec).dump() << "\n";
        std::ofstream state(fs::path(dump_dir) / "state.json", std::ios::binary);
        state << story::EngineSnapshot::save(engine).dump(2) << "\n";
    } else {
        for (const auto& rec : records) std::cout << record_to_json(rec).dump() << "\n";
    }
    return 0;
}

void print_predictions(const Engine& engine, story::Purpose purpose, std::size_t k) {
    auto preds = engine.predictions(purpose, k);
    if (preds.empty()) {
        std::cout << "  (none)\n";
        return;
    }
    for (const auto& t : preds) {
        std::cout << "  " << t.score << "  " << t.rendered << "\n";
    }
}

void print_shadows(const Engine& engine, const std::string& ref) {
    const auto& world = engine.world();
    std::optional<story::InstanceId> target;
    // quoted name or dictionary word
    std::string name = ref;
    if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
        name = name.substr(1, name.size() - 2);
    story::Overlay query;
    if (auto atom = world.vocab().find_proper(name)) {
        query = story::make_overlay(story::AtomKind::Concept, {{*atom, 1.0}});
    } else if (engine.lib().has_word(name)) {
        query = engine.lib().lookup_word(name);
    } else {
        std::cout << "no such reference: " << ref << "\n";
        return;
    }
    double best = 0.0;
    for (const auto& [id, w] : engine.focus().instance_weights()) {
        double score =
            story::coverage_match(world.vocab(), world.instance(id).attributes, query) * w;
        if (score > best) {
            best = score;
            target = id;
        }
    }
    if (!target) {
        std::cout << "no focus instance matches " << ref << "\n";
        return;
    }
    if (!engine.shadows().has_instance_shadow(*target)) {
        std::cout << "instance " << target->v << " has no shadow\n";
        return;
    }
    const story::Shadow& shadow = engine.shadows().instance_shadow(*target);
    std::cout << "shadow of instance " << target->v << " (pool " << shadow.pool << ")\n";
    for (const auto& [raw, w] : shadow.body) {
        std::cout << "  " << w << "  instance " << raw;
        const auto& mem = engine.memory();
        if (mem.has_instance(story::InstanceId{raw})) {
            const auto& attrs = mem.instance(story::InstanceId{raw}).attributes;
            std::cout << " [";
            bool first = true;
            for (const auto& [atom, aw] : attrs.weights) {
                (void)aw;
                if (!first) std::cout << ' ';
                std::cout << world.vocab().info(atom).name;
                first = false;
            }
            std::cout << "]";
        }
        std::cout << "\n";
    }
}

int cmd_repl(const std::string& domain, const std::vector<std::string>& autos,
             const Params& params) {
    auto lib = load_library(domain);
    Engine engine(lib, params);
    for (const std::string& path : autos) {
        run_file(engine, path, 0);
        engine.flush_focus();
    }
    std::cout << "story engine repl; :quit to leave, :help for commands\n";

    std::string line;
    while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first);

        try {
            if (line[0] == ':') {
                std::istringstream ss(line);
                std::string cmd;
                ss >> cmd;
                if (cmd == ":quit" || cmd == ":q") break;
                if (cmd == ":predict" || cmd == ":missing") {
                    std::size_t k = 3;
                    ss >> k;
                    print_predictions(engine,
                                      cmd == ":predict" ? story::Purpose::Continuation
                                                        : story::Purpose::MissingAction,
                                      k);
                } else if (cmd == ":shadows") {
                    std::string ref;
                    std::getline(ss, ref);
                    auto a = ref.find_first_not_of(" \t");
                    if (a == std::string::npos) {
                        std::cout << "usage: :shadows <word or \"Name\">\n";
                    } else {
                        print_shadows(engine, ref.substr(a));
                    }
                } else if (cmd == ":hls") {
                    for (const auto& h : engine.hls_pool()) {
                        if (h.support_continuation <= 0 && h.support_missing <= 0) continue;
                        std::cout << "  cont " << h.support_continuation << "  missing "
                                  << h.support_missing << "  " << engine.render(h.tmpl)
                                  << "\n";
                    }
                } else if (cmd == ":surprise") {
                    std::cout << "surprise " << engine.last_surprise() << "  expectedness "
                              << engine.last_expectedness() << "\n";
                } else if (cmd == ":step") {
                    double dt = 1.0;
                    ss >> dt;
                    engine.step_time(dt);
                    std::cout << "advanced " << dt << " time units\n";
                } else if (cmd == ":scenes") {
                    for (const auto& scene : engine.world().scenes()) {
                        std::cout << "  scene " << scene.id.v << " \"" << scene.label
                                  << "\" (" << scene.members.size() << " instances)"
                                  << (scene.id == engine.focus().current_scene() ? " *"
                                                                                 : "")
                                  << "\n";
                    }
                } else if (cmd == ":save") {
                    std::string path;
                    ss >> path;
                    if (path.empty()) throw story::Error(":save needs a path");
                    std::ofstream out(path, std::ios::binary);
                    out << story::EngineSnapshot::save(engine).dump(2) << "\n";
                    std::cout << "saved " << path << "\n";
                } else if (cmd == ":load") {
                    std::string path;
                    ss >> path;
                    if (path.empty()) throw story::Error(":load needs a path");
                    auto j = nlohmann::json::parse(read_file(path));
                    engine = story::EngineSnapshot::load(j, engine.lib_ptr(),
                                                         engine.params());
                    std::cout << "loaded " << path << "\n";
                } else {
                    std::cout << "commands: <xapi statement> | $<directive> | :predict [k] | "
                                 ":missing [k] | :shadows <ref> | :hls | :surprise | "
                                 ":step <dt> | :scenes | :save <path> | :load <path> | "
                                 ":quit\n";
                }
            } else {
                // statements/directives are transactional: parse fully, run on
                // a copy, and commit only on success
                auto program = story::xapi::parse_program(line);
                Engine next = engine;
                auto records = next.run_program(program, 3);
                engine = std::move(next);
                for (const auto& rec : records) {
                    std::cout << "  " << rec.rendered << "  (expectedness "
                              << rec.expectedness << ", surprise " << rec.surprise
                              << ")\n";
                }
            }
        } catch (const std::exception& e) {
            std::cout << "error: " << e.what() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"story reasoning engine"};
    app.require_subcommand(1);

    std::string domain, story_path, dump_dir, config_path;
    std::vector<std::string> autos, param_kvs;
    std::size_t top_k = 3;

    auto* run = app.add_subcommand("run", "batch: ingest autobiography, follow a story");
    run->add_option("--domain", domain, "domain library file")->required();
    run->add_option("--auto", autos, "autobiography corpus (repeatable, ordered)");
    run->add_option("--story", story_path, "story to follow");
    run->add_option("--dump", dump_dir, "output directory for JSON dumps");
    run->add_option("--param", param_kvs, "parameter override key=value (repeatable)");
    run->add_option("--config", config_path, "key=value parameter file");
    run->add_option("--top-k", top_k, "predictions per record (default 3)");

    auto* repl = app.add_subcommand("repl", "interactive session");
    repl->add_option("--domain", domain, "domain library file")->required();
    repl->add_option("--auto", autos, "autobiography corpus (repeatable, ordered)");
    repl->add_option("--param", param_kvs, "parameter override key=value (repeatable)");
    repl->add_option("--config", config_path, "key=value parameter file");

    CLI11_PARSE(app, argc, argv);

    try {
        Params params = build_params(config_path, param_kvs);
        for (const std::string& p : autos)
            if (!fs::exists(p)) {
                std::cerr << "error: no such file: " << p << "\n";
                return 2;
            }
        if (!fs::exists(domain)) {
            std::cerr << "error: no such file: " << domain << "\n";
            return 2;
        }
        if (run->parsed()) {
            if (!story_path.empty() && !fs::exists(story_path)) {
                std::cerr << "error: no such file: " << story_path << "\n";
                return 2;
            }
            return cmd_run(domain, autos, story_path, dump_dir, params, top_k);
        }
        return cmd_repl(domain, autos, params);
    } catch (const story::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
