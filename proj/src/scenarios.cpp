#include "superframe/scenarios.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "superframe/rng.hpp"

namespace superframe {

namespace {

TaskSpec ms_task(NodeIndex id, Millis r, Millis c, Millis d, Millis t) {
    return {id, r / kDefaultSlotMs, c / kDefaultSlotMs, d / kDefaultSlotMs, t / kDefaultSlotMs};
}

const TaskSpec kTable1Beacon = ms_task(0, 0, 10, 10, 250);

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class Int>
Int parse_int(std::string_view tok, int line_no) {
    Int v{};
    const auto* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || p != end)
        throw ScenarioError("line " + std::to_string(line_no) + ": expected integer, got '" +
                            std::string(tok) + "'");
    return v;
}

Slots to_slots(Millis ms, Millis slot_ms, int line_no) {
    if (ms % slot_ms != 0)
        throw ScenarioError("line " + std::to_string(line_no) + ": " + std::to_string(ms) +
                            " ms is not a multiple of the " + std::to_string(slot_ms) + " ms slot");
    return ms / slot_ms;
}

}  // namespace

Scenario table1_scenario(Slots num_slots) {
    return Scenario(kDefaultSlotMs, num_slots, kTable1Beacon,
                    {ms_task(1, 10, 20, 20, 150), ms_task(2, 20, 20, 80, 80),
                     ms_task(3, 30, 30, 100, 100), ms_task(4, 40, 10, 50, 50)},
                    0);
}

Scenario random_scenario(int n_nodes, Slots num_slots, std::uint64_t seed) {
    if (n_nodes < 1) throw ScenarioError("random scenario needs at least one node");
    using R = RandomRanges;
    constexpr Millis slot = kDefaultSlotMs;
    Rng rng(seed);
    std::vector<TaskSpec> nodes;
    nodes.reserve(static_cast<std::size_t>(n_nodes));
    for (int i = 1; i <= n_nodes; ++i) {
        TaskSpec t;
        t.node_id = i;
        t.release = rng.uniform_int(0, R::release_max / slot);
        t.computation = rng.uniform_int(R::computation_min / slot, R::computation_max / slot);
        t.deadline = rng.uniform_int(t.computation, R::deadline_max / slot);
        t.period = rng.uniform_int(t.deadline, R::period_max / slot);
        nodes.push_back(t);
    }
    return Scenario(slot, num_slots, kTable1Beacon, std::move(nodes), seed);
}

Scenario parse_scenario(std::string_view text, std::vector<std::string>* warnings) {
    bool have_header = false;
    bool have_beacon = false;
    Millis slot_ms = 0;
    Slots num_slots = 0;
    std::uint64_t seed = 0;
    TaskSpec beacon;
    std::vector<TaskSpec> nodes;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = split_ws(line);
        if (tok.empty()) continue;

        if (!have_header) {
            if (tok.size() != 3)
                throw ScenarioError("line " + std::to_string(line_no) +
                                    ": header must be 'slot_ms num_slots seed'");
            slot_ms = parse_int<Millis>(tok[0], line_no);
            num_slots = parse_int<Slots>(tok[1], line_no);
            seed = parse_int<std::uint64_t>(tok[2], line_no);
            if (slot_ms <= 0) throw ScenarioError("line " + std::to_string(line_no) + ": slot_ms must be positive");
            have_header = true;
            continue;
        }
        if (tok.size() != 5)
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": expected '<B|N<id>> release computation deadline period'");
        TaskSpec t;
        if (tok[0] == "B") {
            if (have_beacon) throw ScenarioError("line " + std::to_string(line_no) + ": duplicate beacon");
            if (!nodes.empty()) throw ScenarioError("line " + std::to_string(line_no) + ": beacon must precede nodes");
            t.node_id = kBeacon;
        } else if (tok[0].size() > 1 && tok[0][0] == 'N') {
            if (!have_beacon) throw ScenarioError("line " + std::to_string(line_no) + ": beacon line missing");
            t.node_id = parse_int<NodeIndex>(tok[0].substr(1), line_no);
        } else {
            throw ScenarioError("line " + std::to_string(line_no) + ": unknown stream tag '" +
                                std::string(tok[0]) + "'");
        }
        t.release = to_slots(parse_int<Millis>(tok[1], line_no), slot_ms, line_no);
        t.computation = to_slots(parse_int<Millis>(tok[2], line_no), slot_ms, line_no);
        t.deadline = to_slots(parse_int<Millis>(tok[3], line_no), slot_ms, line_no);
        t.period = to_slots(parse_int<Millis>(tok[4], line_no), slot_ms, line_no);
        if (t.node_id == kBeacon) {
            beacon = t;
            have_beacon = true;
        } else {
            nodes.push_back(t);
        }
    }
    if (!have_header) throw ScenarioError("empty scenario file");
    if (!have_beacon) throw ScenarioError("beacon line missing");

    Scenario sc(slot_ms, num_slots, beacon, std::move(nodes), seed);
    if (warnings) {
        for (NodeIndex k = 0; k < sc.num_streams(); ++k) {
            const TaskSpec& t = sc.stream(k);
            if (t.computation > t.deadline)
                warnings->push_back((k == kBeacon ? std::string("B") : "N" + std::to_string(k)) +
                                    ": computation exceeds deadline; superframe is not schedulable");
        }
    }
    return sc;
}

std::string format_scenario(const Scenario& sc) {
    std::ostringstream out;
    auto row = [&](const TaskSpec& t) {
        out << ' ' << sc.to_ms(t.release) << ' ' << sc.to_ms(t.computation) << ' '
            << sc.to_ms(t.deadline) << ' ' << sc.to_ms(t.period) << '\n';
    };
    out << sc.slot_ms() << ' ' << sc.num_slots() << ' ' << sc.seed() << '\n';
    out << 'B';
    row(sc.beacon());
    for (const TaskSpec& t : sc.nodes()) {
        out << 'N' << t.node_id;
        row(t);
    }
    return out.str();
}

Scenario load_scenario(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), warnings);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write scenario file " + path.string());
    out << format_scenario(scenario);
    if (!out) throw ScenarioError("write failed for " + path.string());
}

}  // namespace superframe
