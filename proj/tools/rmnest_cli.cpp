// rmnest command-line front end.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "rmnest/acceptance.hpp"
#include "rmnest/commands.hpp"
#include "rmnest/io.hpp"

namespace {

using namespace rmnest;

const std::vector<std::string> shared_keys = {"code", "channel", "p", "mode", "samples", "seed", "workers", "target"};

const std::map<std::string, std::vector<std::string>> command_keys = {
    {"rm-info", {}},
    {"metrics", {"metrics"}},
    {"bound-table", {"kind", "variant", "rho", "start", "ell", "m", "m-min", "m-max", "r", "steps"}},
    {"bound-trace", {"theorem", "capacity", "delta", "eta", "k", "m", "r", "s", "t"}},
    {"fourier-analyze", {}},
    {"exit-curve", {"grid"}},
    {"looks", {"m", "r", "s", "t"}},
    {"spread", {"s", "t"}},
    {"transfer", {"d", "delta", "theta", "tol"}},
};

const std::map<std::string, std::string> command_help = {
    {"rm-info", "code parameters, rate and nesting facts"},
    {"metrics", "extrinsic error metrics, exact or Monte Carlo"},
    {"bound-table", "tabulate rate, two-look, alpha or recursion bounds"},
    {"bound-trace", "stage-by-stage trace of a decay bound"},
    {"fourier-analyze", "Fourier checks on an extrinsic indicator"},
    {"exit-curve", "EXIT curve and area for a code"},
    {"looks", "multi-look family, projections and majority experiment"},
    {"spread", "spread family over GF(2^(st))"},
    {"transfer", "threshold transfer bounds"},
};

struct output_opts {
    std::string out;
    std::string format = "csv";
};

void emit(const std::string& text, const output_opts& o) {
    if (o.out.empty() || o.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw parameter_error("cannot open output file '" + o.out + "'");
    f << text;
}

std::vector<int> parse_suite(const std::string& suite) {
    std::vector<int> ids;
    if (suite == "all" || suite.empty()) {
        for (const auto& c : acceptance::criteria()) ids.push_back(c.id);
        return ids;
    }
    if (suite == "quick") {
        for (const auto& c : acceptance::criteria())
            if (c.budget_seconds <= 30) ids.push_back(c.id);
        return ids;
    }
    command_args a;
    a.set("suite", suite);
    for (double v : a.get_list("suite", {})) {
        int id = static_cast<int>(v);
        if (id < 1 || id > static_cast<int>(acceptance::criteria().size()) || id != v)
            throw parameter_error("--suite: unknown criterion '" + std::to_string(v) + "'");
        ids.push_back(id);
    }
    return ids;
}

int run_verify(const std::string& suite, const output_opts& o) {
    result_table t;
    t.columns = {"id", "name", "pass", "seconds", "budget", "detail"};
    t.set_meta("tool", "rmnest");
    t.set_meta("version", tool_version);
    t.set_meta("command", "verify");
    t.set_meta("suite", suite);
    bool all = true;
    for (int id : parse_suite(suite)) {
        auto r = acceptance::run_one(acceptance::criteria()[static_cast<std::size_t>(id - 1)]);
        std::cerr << acceptance::format_line(r) << std::endl;
        all = all && r.pass;
        t.add_row({static_cast<std::int64_t>(r.id), r.name, r.pass, r.seconds, r.budget, r.detail});
    }
    emit(render(t, o.format), o);
    return all ? 0 : 3;
}

int dispatch(const std::string& cmd, const command_args& args, const output_opts& o) {
    if (cmd == "verify") return run_verify(args.has("suite") ? args.get("suite") : "all", o);
    emit(render(run_command(cmd, args), o.format), o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmnest: Reed-Muller nesting, decoding and bound experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rmnest::tool_version));

    std::string chosen;
    std::map<std::string, std::string> values;
    output_opts o;
    std::string suite = "all", config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    for (const auto& name : rmnest::command_names()) {
        auto* sub = app.add_subcommand(name, command_help.at(name));
        add_common(sub);
        std::vector<std::string> keys = shared_keys;
        const auto& extra = command_keys.at(name);
        keys.insert(keys.end(), extra.begin(), extra.end());
        for (const auto& k : keys) sub->add_option("--" + k, values[name + "/" + k]);
        sub->callback([&chosen, name] { chosen = name; });
    }
    auto* verify = app.add_subcommand("verify", "run the acceptance suite (all, quick, or a list of criterion ids)");
    add_common(verify);
    verify->add_option("--suite", suite, "suite name or criterion ids, e.g. 1,4,9");
    verify->callback([&] { chosen = "verify"; });

    auto* run = app.add_subcommand("run", "run an experiment described by a key = value config file");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run->callback([&] { chosen = "run"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (chosen == "verify") return run_verify(suite, o);
        if (chosen == "run") {
            auto cfg = rmnest::load_config(config_path);
            auto [cmd, args] = rmnest::config_to_args(cfg);
            if (args.has("out")) o.out = args.get("out");
            if (args.has("format")) o.format = args.get("format");
            if (o.format != "csv" && o.format != "json") throw rmnest::config_error(cfg.line_of("format"), "format must be csv or json");
            return dispatch(cmd, args, o);
        }
        rmnest::command_args args;
        const std::string prefix = chosen + "/";
        for (const auto& [k, v] : values)
            if (k.rfind(prefix, 0) == 0 && !v.empty()) args.set(k.substr(prefix.size()), v);
        return dispatch(chosen, args, o);
    } catch (const rmnest::feasibility_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
