#pragma once

#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbbench/util.hpp"

namespace pbbench {

// One function evaluation as seen by the logger.
struct LogEvent {
    long long evaluations = 0;  // strictly increasing within a run
    double raw = 0;
    double raw_best = 0;  // non-decreasing within a run
    double transformed = 0;
    double transformed_best = 0;
    std::span<const double> parameters;  // tracked channels, fixed per run
};

class RunLogger {
public:
    virtual ~RunLogger() = default;
    virtual void record(const LogEvent& event) = 0;
    virtual void close() {}
};

enum class LogMode { delta, full };

inline const char* to_string(LogMode m) { return m == LogMode::delta ? "delta" : "full"; }

inline LogMode log_mode_from_string(std::string_view s) {
    if (s == "delta") return LogMode::delta;
    if (s == "full") return LogMode::full;
    throw std::invalid_argument("log mode must be 'delta' or 'full'");
}

// Streams evaluations as CSV rows. Delta mode keeps only strict improvements
// of the best-so-far raw value plus the final evaluation of the run; full
// mode keeps every row.
class DatLogger final : public RunLogger {
public:
    DatLogger(std::ostream& out, LogMode mode, std::span<const std::string> parameter_names)
        : out_(&out), mode_(mode) {
        std::string header = "evaluations,raw_y,raw_y_best,trans_y,trans_y_best";
        for (const auto& name : parameter_names) {
            header += ',';
            header += name;
        }
        header += '\n';
        *out_ << header;
    }

    void record(const LogEvent& event) override {
        if (event.evaluations <= last_evaluations_)
            throw std::logic_error("DatLogger: evaluation records out of order");
        last_evaluations_ = event.evaluations;
        const bool improved = event.raw_best > best_seen_;
        if (improved) best_seen_ = event.raw_best;
        if (mode_ == LogMode::full || improved) {
            write_row(event);
            pending_ = false;
            return;
        }
        stash(event);
    }

    // Flushes the held final evaluation, if it was not already written.
    void close() override {
        if (pending_) {
            LogEvent event{held_.evaluations, held_.raw, held_.raw_best, held_.transformed,
                           held_.transformed_best, held_params_};
            write_row(event);
            pending_ = false;
        }
        out_->flush();
    }

private:
    struct Held {
        long long evaluations;
        double raw, raw_best, transformed, transformed_best;
    };

    void stash(const LogEvent& event) {
        held_ = {event.evaluations, event.raw, event.raw_best, event.transformed,
                 event.transformed_best};
        held_params_.assign(event.parameters.begin(), event.parameters.end());
        pending_ = true;
    }

    void write_row(const LogEvent& event) {
        row_.clear();
        append_number(row_, event.evaluations);
        row_ += ',';
        append_number(row_, event.raw);
        row_ += ',';
        append_number(row_, event.raw_best);
        row_ += ',';
        append_number(row_, event.transformed);
        row_ += ',';
        append_number(row_, event.transformed_best);
        for (const double p : event.parameters) {
            row_ += ',';
            append_number(row_, p);
        }
        row_ += '\n';
        *out_ << row_;
    }

    std::ostream* out_;
    LogMode mode_;
    long long last_evaluations_ = 0;
    double best_seen_ = -std::numeric_limits<double>::infinity();
    bool pending_ = false;
    Held held_{};
    std::vector<double> held_params_;
    std::string row_;
};

// Keeps every event in memory; used by tests and replay checks.
class MemoryLogger final : public RunLogger {
public:
    struct Entry {
        long long evaluations;
        double raw, raw_best, transformed, transformed_best;
        std::vector<double> parameters;
    };

    void record(const LogEvent& event) override {
        entries_.push_back({event.evaluations, event.raw, event.raw_best, event.transformed,
                            event.transformed_best,
                            {event.parameters.begin(), event.parameters.end()}});
    }

    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
};

}  // namespace pbbench
