#ifndef QCS_TIMESTAMP_HPP
#define QCS_TIMESTAMP_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qcs {

enum class Party : uint8_t { Ground = 0, Satellite = 1 };

enum class DetectionLabel : uint8_t { Pair = 0, Background = 1, Dark = 2 };

/**
 * Tagged photon detections for one party over one acquisition window.
 * Ticks are integer multiples of t_bin counted from the scenario origin,
 * sorted ascending. Truth labels are diagnostics only; estimation code
 * never reads them.
 */
struct TimestampSet {
    std::vector<uint64_t> ticks;
    std::vector<uint8_t> labels;  // parallel to ticks; may be empty
    double t_bin_s = 0.5e-9;
    uint64_t window_start_tick = 0;
    uint64_t window_end_tick = 0;
    Party party = Party::Ground;

    bool empty() const { return ticks.empty(); }
    std::size_t size() const { return ticks.size(); }
    TimestampSet without_labels() const {
        TimestampSet s = *this;
        s.labels.clear();
        return s;
    }
};

/** Round-half-up quantization of a time to ticks. Negative times reject. */
uint64_t quantize_tick(double t_s, double t_bin_s);

/** Merge label-tagged (tick,label) streams into one sorted set. */
void sort_by_tick(TimestampSet& set);

/**
 * Flat binary dump: little-endian header (magic, t_bin in seconds as double,
 * window bounds, record count) followed by 10-byte records
 * (tick: u64, party: u8, label: u8). One file holds both parties of one
 * link direction.
 */
void write_timestamp_dump(const std::string& path, const TimestampSet& local,
                          const TimestampSet& remote);
void read_timestamp_dump(const std::string& path, TimestampSet& ground,
                         TimestampSet& satellite);

}  // namespace qcs

#endif  // QCS_TIMESTAMP_HPP
