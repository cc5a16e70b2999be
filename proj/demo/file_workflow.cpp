// File-based workflow: generate an instance from a spec, serialize everything
// to JSON on disk, read it back, and re-verify the parsed trace. This is the
// same round trip the command-line tool performs between its subcommands.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "pricing/generators.hpp"
#include "pricing/item_halving.hpp"
#include "pricing/json_io.hpp"
#include "pricing/verify.hpp"

using namespace pricing;
namespace js = pricing::jsonio;
namespace hv = pricing::halving;
namespace vf = pricing::verify;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "pricing_demo";
    fs::create_directories(dir);

    // 1. A generator spec, as a script would write it.
    generators::GenSpec spec;
    spec.cls = ValuationClass::Xos;
    spec.m = 3;
    spec.buyers = 3;
    spec.value_max = 20;
    spec.clauses_min = 1;
    spec.clauses_max = 2;
    spec.seed = 2024;
    const fs::path spec_path = dir / "spec.json";
    write_file(spec_path, js::serialize(js::to_json(spec)));
    std::cout << "wrote " << spec_path << "\n";

    // 2. Generate and persist the instance.
    const Instance inst = generators::generate(js::gen_spec_from_json(js::parse(read_file(spec_path))));
    const fs::path inst_path = dir / "instance.json";
    write_file(inst_path, js::serialize(js::to_json(inst)));
    std::cout << "wrote " << inst_path << " (" << inst.m << " goods, "
              << inst.buyer_count() << " buyers)\n";

    // 3. Solve the parsed copy, then persist the full result document.
    const Instance loaded = js::instance_from_json(js::parse(read_file(inst_path)));
    const auto res = hv::solve_xos(loaded, hv::GammaStrategy::adversarial());
    js::Json doc;
    doc["kind"] = "xos-core";
    doc["instance"] = js::to_json(loaded);
    doc["initial"] = js::to_json(res.initial, loaded.m);
    doc["solution"] = js::to_json(res.solution, loaded.m);
    doc["trace"] = js::to_json(res.trace, loaded.m);
    const fs::path out_path = dir / "result.json";
    write_file(out_path, js::serialize(doc));
    std::cout << "wrote " << out_path << " (" << res.trace.gamma << " rounds, kept "
              << res.trace.selected << ")\n";

    // 4. Read the document back and re-check every claim from the file alone.
    const js::Json back = js::parse(read_file(out_path));
    const Instance inst2 = js::instance_from_json(back.at("instance"));
    const Allocation initial2 = js::allocation_from_json(back.at("initial"), inst2.m);
    const auto trace2 = js::core_trace_from_json(back.at("trace"), inst2.m);
    const auto reports = vf::verify_core_bundle(inst2, initial2, trace2);
    for (const auto& r : reports)
        std::cout << "  [" << (r.pass ? "ok" : "VIOLATED") << "] " << r.claim << "\n";

    const bool ok = vf::all_pass(reports);
    std::cout << (ok ? "round trip verified" : "round trip FAILED") << "\n";
    return ok ? 0 : 1;
}
