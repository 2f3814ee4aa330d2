#include "qcs/timestamp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace qcs {

namespace {
constexpr char kMagic[8] = {'Q', 'C', 'S', 'T', 'S', '0', '0', '1'};

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
}  // namespace

uint64_t quantize_tick(double t_s, double t_bin_s) {
    const double q = std::floor(t_s / t_bin_s + 0.5);
    if (q < 0.0) throw std::domain_error("quantize_tick: negative timestamp");
    return static_cast<uint64_t>(q);
}

void sort_by_tick(TimestampSet& set) {
    if (set.labels.empty()) {
        std::sort(set.ticks.begin(), set.ticks.end());
        return;
    }
    std::vector<std::size_t> order(set.ticks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set.ticks[a] < set.ticks[b];
    });
    std::vector<uint64_t> ticks(set.ticks.size());
    std::vector<uint8_t> labels(set.labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        ticks[i] = set.ticks[order[i]];
        labels[i] = set.labels[order[i]];
    }
    set.ticks = std::move(ticks);
    set.labels = std::move(labels);
}

void write_timestamp_dump(const std::string& path, const TimestampSet& local,
                          const TimestampSet& remote) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os.write(kMagic, sizeof(kMagic));
    put(os, local.t_bin_s);
    put(os, std::min(local.window_start_tick, remote.window_start_tick));
    put(os, std::max(local.window_end_tick, remote.window_end_tick));
    put(os, static_cast<uint64_t>(local.size() + remote.size()));
    auto emit = [&](const TimestampSet& s) {
        for (std::size_t i = 0; i < s.ticks.size(); ++i) {
            put(os, s.ticks[i]);
            put(os, static_cast<uint8_t>(s.party));
            put(os, s.labels.empty() ? uint8_t{0} : s.labels[i]);
        }
    };
    emit(local);
    emit(remote);
}

void read_timestamp_dump(const std::string& path, TimestampSet& ground,
                         TimestampSet& satellite) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for read: " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw std::runtime_error("bad timestamp dump header: " + path);
    const double t_bin = get<double>(is);
    const uint64_t w0 = get<uint64_t>(is);
    const uint64_t w1 = get<uint64_t>(is);
    const uint64_t n = get<uint64_t>(is);

    for (TimestampSet* s : {&ground, &satellite}) {
        *s = TimestampSet{};
        s->t_bin_s = t_bin;
        s->window_start_tick = w0;
        s->window_end_tick = w1;
    }
    ground.party = Party::Ground;
    satellite.party = Party::Satellite;

    for (uint64_t i = 0; i < n; ++i) {
        const uint64_t tick = get<uint64_t>(is);
        const uint8_t party = get<uint8_t>(is);
        const uint8_t label = get<uint8_t>(is);
        if (!is) throw std::runtime_error("truncated timestamp dump: " + path);
        TimestampSet& dst = party == 0 ? ground : satellite;
        dst.ticks.push_back(tick);
        dst.labels.push_back(label);
    }
    sort_by_tick(ground);
    sort_by_tick(satellite);
}

}  // namespace qcs
