// toric-holim: command-line front end.
//
// Exit codes: 0 ok, 1 a check came out false, 2 bad input, 3 window too small.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "toric_holim/io.hpp"

using namespace toric;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, VerdictFalse = 1, InputError = 2, WindowTooSmall = 3 };

struct Options {
    std::string fan_path;
    std::string presheaf_path;
    std::string map_path;
    std::string bundle;
    std::string window;  // empty: the subcommand's default
    std::string format = "json";
    unsigned threads = default_threads();
    bool acyclic = false;
};

std::vector<Int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<Int> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "bad " + what + " '" + text + "'");
        }
    }
    return v;
}

// "auto", or per-coordinate "lo:hi,lo:hi,..."
Window parse_window(const std::string& text, std::size_t rank) {
    Window w;
    if (text == "auto") return w;
    w.kind = Window::Kind::Box;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) fail(ErrorCode::ParseError, "window must be auto, chambers or lo:hi,...");
        auto lo = parse_int_list(item.substr(0, colon), "window bound");
        auto hi = parse_int_list(item.substr(colon + 1), "window bound");
        if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) fail(ErrorCode::ParseError, "bad window range '" + item + "'");
        w.lo.push_back(lo[0]);
        w.hi.push_back(hi[0]);
    }
    if (w.lo.size() != rank) fail(ErrorCode::RankMismatch, "window needs one range per coordinate");
    return w;
}

CheckMode parse_mode(const std::string& text, std::size_t rank) {
    if (text == "chambers") return {};
    return {CheckMode::Kind::Window, parse_window(text, rank)};
}

Fan load_fan(const Options& o) { return io::parse_fan(io::read_json_file(o.fan_path)); }

MonomialPresheaf<Rational> load_presheaf(const Options& o, const Fan& fan) {
    if (!o.bundle.empty() && !o.presheaf_path.empty()) fail(ErrorCode::ParseError, "give either --bundle or --presheaf");
    if (!o.bundle.empty()) {
        auto k = parse_int_list(o.bundle, "twist vector");
        if (k.size() != fan.num_rays()) fail(ErrorCode::RankMismatch, "twist vector needs one entry per ray");
        return line_bundle<Rational>(fan, k);
    }
    if (o.presheaf_path.empty()) fail(ErrorCode::ParseError, "a presheaf is required (--bundle or --presheaf)");
    return io::parse_presheaf<Rational>(io::read_json_file(o.presheaf_path), fan);
}

PresheafMap<Rational> load_map(const Options& o, const Fan& fan) {
    if (o.map_path.empty()) fail(ErrorCode::ParseError, "a map is required (--map)");
    return io::parse_map<Rational>(io::read_json_file(o.map_path), fan);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int run_table(const Options& o) {
    auto fan = load_fan(o);
    auto c = load_presheaf(o, fan);
    if (o.window == "chambers") fail(ErrorCode::ParseError, "tables need an auto or box window");
    auto t = holim_graded(c, parse_window(o.window, fan.rank()), o.threads);
    if (o.format == "tsv")
        std::cout << io::table_tsv(t, fan.rank());
    else
        emit(io::table_json(t));
    return Ok;
}

int run(const std::string& command, const Options& o) {
    if (command == "fan-check") {
        emit(io::fan_json(load_fan(o)));
        return Ok;
    }
    if (command == "rsigma") {
        emit(io::vectors_json(r_sigma(load_fan(o)).vectors));
        return Ok;
    }
    if (command == "cohomology" || command == "holim") return run_table(o);
    if (command == "sheaf-check") {
        auto fan = load_fan(o);
        auto v = is_homotopy_sheaf(load_presheaf(o, fan), parse_mode(o.window, fan.rank()));
        emit(io::sheaf_json(v, fan));
        return v.pass() ? Ok : VerdictFalse;
    }
    if (command == "colocal-check") {
        auto fan = load_fan(o);
        auto mode = parse_mode(o.window, fan.rank());
        auto r = r_sigma(fan);
        auto rep = o.acyclic ? acyclicity_report(load_presheaf(o, fan), r, mode, o.threads)
                             : colocal_report(load_map(o, fan), r, mode, o.threads);
        emit(io::colocal_json(rep));
        return rep.pass() ? Ok : VerdictFalse;
    }
    if (command == "generator-report") {
        auto fan = load_fan(o);
        auto rep = weak_generator_report(load_map(o, fan), parse_mode(o.window, fan.rank()), o.threads);
        emit(json{{"objectwise_qiso", rep.objectwise_qiso},
                  {"colocal", rep.colocal},
                  {"agree", rep.objectwise_qiso == rep.colocal},
                  {"report", io::colocal_json(rep.detail)}});
        return rep.objectwise_qiso == rep.colocal ? Ok : VerdictFalse;
    }
    return InputError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopy limits of presheaves of chain complexes on regular fans"};
    app.require_subcommand(1);
    Options o;

    auto add_fan = [&](CLI::App* sub) { sub->add_option("fan", o.fan_path, "fan JSON file")->required(); };
    auto add_presheaf = [&](CLI::App* sub) {
        sub->add_option("--bundle", o.bundle, "line bundle O(k): comma-separated integers in ray order");
        sub->add_option("--presheaf", o.presheaf_path, "presheaf JSON file");
    };
    auto add_window = [&](CLI::App* sub, const std::string& dflt) {
        sub->add_option("--window", o.window, "auto, chambers, or a box lo:hi,lo:hi,... (default " + dflt + ")");
    };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "worker threads (default: TORIC_HOLIM_THREADS or 1)");
    };

    auto* fan_check = app.add_subcommand("fan-check", "validate a fan and report regularity and completeness");
    add_fan(fan_check);
    auto* rsigma = app.add_subcommand("rsigma", "the generator set R_Sigma as twist vectors");
    add_fan(rsigma);
    for (const char* name : {"cohomology", "holim"}) {
        auto* sub = app.add_subcommand(name, name == std::string("cohomology")
                                                 ? "graded cohomology of a presheaf, in both index conventions"
                                                 : "graded homology table of the homotopy limit");
        add_fan(sub);
        add_presheaf(sub);
        sub->add_option("--format", o.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
        add_threads(sub);
    }
    auto* sheaf = app.add_subcommand("sheaf-check", "test the homotopy-sheaf condition");
    add_fan(sheaf);
    add_presheaf(sheaf);
    auto* colocal = app.add_subcommand("colocal-check", "test R_Sigma-colocal equivalence of a map");
    add_fan(colocal);
    colocal->add_option("--map", o.map_path, "map JSON file");
    colocal->add_flag("--acyclic", o.acyclic, "test colocal acyclicity of a presheaf instead");
    add_presheaf(colocal);
    add_threads(colocal);
    auto* report = app.add_subcommand("generator-report", "objectwise and colocal verdicts for a map of homotopy sheaves");
    add_fan(report);
    report->add_option("--map", o.map_path, "map JSON file")->required();
    add_threads(report);

    for (auto* sub : {app.get_subcommand("cohomology"), app.get_subcommand("holim")}) add_window(sub, "auto");
    for (auto* sub : {sheaf, colocal, report}) add_window(sub, "chambers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return InputError;
    }
    auto* chosen = app.get_subcommands().front();
    if (o.window.empty()) o.window = (chosen == sheaf || chosen == colocal || chosen == report) ? "chambers" : "auto";

    try {
        return run(chosen->get_name(), o);
    } catch (const Error& e) {
        std::cerr << "toric-holim: " << e.what() << '\n';
        return e.code() == ErrorCode::WindowInsufficient ? WindowTooSmall : InputError;
    } catch (const std::exception& e) {
        std::cerr << "toric-holim: " << e.what() << '\n';
        return InputError;
    }
}
