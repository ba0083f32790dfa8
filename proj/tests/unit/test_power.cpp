#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "wattmark/errors.hpp"
#include "wattmark/power/sampler.hpp"
#include "wattmark/power/telemetry.hpp"
#include "wattmark/power/trace_csv.hpp"

using namespace wattmark;
using namespace wattmark::power;
using namespace std::chrono_literals;

namespace {

// Returns scripted readings; NaN entries fail with TelemetryError. Repeats
// the last entry once the script runs out.
class ScriptedBackend final : public TelemetryBackend {
 public:
  explicit ScriptedBackend(std::vector<double> script) : script_(std::move(script)) {}
  BackendKind kind() const override { return BackendKind::synthetic; }
  std::string describe() const override { return "scripted"; }
  double read_watts() override {
    const double w = script_[std::min(reads_++, script_.size() - 1)];
    if (std::isnan(w)) throw TelemetryError("scripted failure");
    return w;
  }
  std::size_t reads() const { return reads_; }

 private:
  std::vector<double> script_;
  std::size_t reads_ = 0;
};

PowerTrace simulate(std::shared_ptr<TelemetryBackend> backend, Clock::duration duration,
                    double interval_s, SamplingOptions options = {}) {
  auto clock = std::make_shared<SimulatedClock>(duration);
  options.interval_s = interval_s;
  auto session = start_sampling(std::move(backend), clock, options);
  clock->settle();
  return session.stop_and_seal();
}

PowerTrace sealed(std::vector<double> watts) {
  std::vector<PowerSample> s;
  for (std::size_t i = 0; i < watts.size(); ++i) {
    s.push_back({static_cast<std::int64_t>(i) * 1000, watts[i]});
  }
  return PowerTrace::sealed_from("t", 1.0, std::move(s));
}

double naive_rms(std::span<const PowerSample> samples) {
  long double acc = 0;
  for (const auto& s : samples) acc += static_cast<long double>(s.watts) * s.watts;
  return static_cast<double>(std::sqrt(acc / samples.size()));
}

}  // namespace

TEST(Sampler, TrialOf185sAt60sGivesFourSamples) {
  auto trace = simulate(std::make_shared<ScriptedBackend>(std::vector<double>{100.0}), 185s, 60.0);
  ASSERT_EQ(trace.size(), 4u);
  const std::vector<std::int64_t> expected{0, 60000, 120000, 180000};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(trace.samples()[i].elapsed_ms, expected[i]);
  EXPECT_TRUE(trace.sealed());
}

TEST(Sampler, ShortTrialKeepsOnlyStartupSample) {
  auto trace = simulate(std::make_shared<ScriptedBackend>(std::vector<double>{100.0}), 5s, 60.0);
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace.samples()[0].elapsed_ms, 0);
}

TEST(Sampler, SampleCountIsFloorOfDurationOverIntervalPlusOne) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ms(0, 20000);
  std::uniform_int_distribution<int> interval_ms(50, 3000);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = std::chrono::milliseconds(ms(rng));
    const int i_ms = interval_ms(rng);
    auto trace = simulate(std::make_shared<ScriptedBackend>(std::vector<double>{50.0}), d,
                          i_ms / 1000.0);
    EXPECT_EQ(trace.size(), static_cast<std::size_t>(d.count() / i_ms) + 1)
        << "duration " << d.count() << " ms, interval " << i_ms << " ms";
  }
}

TEST(Sampler, FirstReadFailureAbortsWithTelemetryError) {
  auto backend = std::make_shared<ScriptedBackend>(std::vector<double>{NAN, 100.0});
  auto clock = std::make_shared<SimulatedClock>(185s);
  EXPECT_THROW(start_sampling(backend, clock, {}), TelemetryError);
}

TEST(Sampler, TransientFailuresAreSkippedAndCounted) {
  auto backend = std::make_shared<ScriptedBackend>(std::vector<double>{100.0, NAN, 110.0, NAN, 120.0});
  auto clock = std::make_shared<SimulatedClock>(245s);
  auto session = start_sampling(backend, clock, {.interval_s = 60.0});
  clock->settle();
  auto trace = session.stop_and_seal();
  EXPECT_EQ(session.skipped_reads(), 2u);
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_EQ(trace.samples()[1].elapsed_ms, 120000);
  EXPECT_DOUBLE_EQ(trace.samples()[2].watts, 120.0);
}

TEST(Sampler, ThreeSamplesSealToLengthThree) {
  auto trace = simulate(std::make_shared<ScriptedBackend>(std::vector<double>{1.0, 2.0, 3.0}),
                        2500ms, 1.0);
  EXPECT_EQ(trace.size(), 3u);
}

TEST(Sampler, DoubleSealIsRejected) {
  auto backend = std::make_shared<ScriptedBackend>(std::vector<double>{100.0});
  auto clock = std::make_shared<SimulatedClock>(10s);
  auto session = start_sampling(backend, clock, {.interval_s = 60.0});
  clock->settle();
  session.stop_and_seal();
  EXPECT_FALSE(session.active());
  EXPECT_THROW(session.stop_and_seal(), AlreadySealedError);
}

TEST(Sampler, FailedStartupWithNothingLaterIsInvalidTrace) {
  auto backend = std::make_shared<ScriptedBackend>(std::vector<double>{NAN});
  auto clock = std::make_shared<SimulatedClock>(130s);
  auto session = start_sampling(backend, clock,
                                {.interval_s = 60.0, .abort_on_startup_failure = false});
  clock->settle();
  EXPECT_THROW(session.stop_and_seal(), InvalidTraceError);
  EXPECT_EQ(session.skipped_reads(), 3u);
}

TEST(Sampler, RejectsNonPositiveInterval) {
  EXPECT_THROW(interval_from_seconds(0.0), ContractViolation);
  EXPECT_THROW(interval_from_seconds(-1.0), ContractViolation);
}

TEST(Sampler, SteadyClockRunsInRealTime) {
  auto backend = std::make_shared<ScriptedBackend>(std::vector<double>{80.0});
  auto session = start_sampling(backend, std::make_shared<SteadyClock>(), {.interval_s = 0.02});
  std::this_thread::sleep_for(110ms);
  auto trace = session.stop_and_seal();
  EXPECT_GE(trace.size(), 3u);
  EXPECT_LE(trace.size(), 7u);
  EXPECT_EQ(trace.samples()[0].elapsed_ms, 0);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_GE(trace.samples()[i].elapsed_ms, trace.samples()[i - 1].elapsed_ms);
  }
}

TEST(Rms, HandExamples) {
  EXPECT_EQ(rms_watts(sealed({100, 100, 100})), 100.0);
  EXPECT_EQ(rms_watts(sealed({123.456})), 123.456);
  EXPECT_NEAR(rms_watts(sealed({3, 4})), 3.5355339, 1e-7);
  EXPECT_DOUBLE_EQ(rms_watts(sealed({3, 4})), std::sqrt(12.5));
}

TEST(Rms, UnsealedTraceIsContractViolation) {
  PowerTrace t("t", 1.0);
  t.append({0, 10.0});
  EXPECT_THROW(rms_watts(t), ContractViolation);
  EXPECT_THROW(mean_watts(t), ContractViolation);
}

TEST(Rms, AtLeastMeanAndScalesLinearly) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(1e-3, 1000.0);
  std::uniform_int_distribution<int> len(1, 300);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> v(len(rng));
    for (auto& x : v) x = w(rng);
    const auto trace = sealed(v);
    const double r = rms_watts(trace);
    const double m = mean_watts(trace);
    EXPECT_GE(r, m * (1 - 1e-15));
    EXPECT_NEAR(r, naive_rms(trace.samples()), 1e-12 * r);

    const double c = w(rng) / 10.0;
    std::vector<double> scaled(v);
    for (auto& x : scaled) x *= c;
    EXPECT_NEAR(rms_watts(sealed(scaled)), c * r, 1e-12 * c * r);
  }
}

TEST(Rms, EqualsMeanOnlyForConstantTraces) {
  EXPECT_EQ(rms_watts(sealed({42, 42, 42, 42})), mean_watts(sealed({42, 42, 42, 42})));
  EXPECT_GT(rms_watts(sealed({42, 42, 42, 43})), mean_watts(sealed({42, 42, 42, 43})));
}

TEST(PowerTrace, EnforcesSampleRules) {
  PowerTrace t("t", 1.0);
  EXPECT_THROW(t.append({0, 0.0}), InvalidTraceError);
  EXPECT_THROW(t.append({0, -1.0}), InvalidTraceError);
  EXPECT_THROW(t.append({0, INFINITY}), InvalidTraceError);
  EXPECT_THROW(t.append({-1, 10.0}), InvalidTraceError);
  t.append({10, 1.0});
  EXPECT_THROW(t.append({9, 1.0}), InvalidTraceError);
  t.append({10, 2.0});
  t.seal();
  EXPECT_THROW(t.append({20, 1.0}), ContractViolation);
  EXPECT_THROW(t.seal(), AlreadySealedError);

  PowerTrace empty("e", 1.0);
  EXPECT_THROW(empty.seal(), InvalidTraceError);
}

TEST(TraceCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.5, 400.0);
  std::vector<PowerSample> samples;
  for (int i = 0; i < 50; ++i) samples.push_back({i * 60000LL, w(rng)});
  const auto trace = PowerTrace::sealed_from("rt", 60.0, samples);

  std::stringstream buf;
  write_trace_csv(buf, trace);
  const auto text = buf.str();
  EXPECT_EQ(text.rfind("elapsed_ms,watts\n", 0), 0u);
  EXPECT_EQ(text.find('\r'), std::string::npos);

  const auto back = read_trace_csv(buf, "rt", 60.0);
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) EXPECT_EQ(back.samples()[i], samples[i]);
  EXPECT_EQ(rms_watts(back), rms_watts(trace));
}

TEST(TraceCsv, MalformedInputNamesTheLine) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_trace_csv(in, "x", 1.0);
  };
  EXPECT_THROW(parse("time,watts\n0,1\n"), SchemaError);
  EXPECT_THROW(parse("elapsed_ms,watts\n"), InvalidTraceError);
  EXPECT_THROW(parse("elapsed_ms,watts\n0,-5\n"), InvalidTraceError);
  EXPECT_THROW(parse("elapsed_ms,watts\r\n0,5\r\n"), SchemaError);
  try {
    parse("elapsed_ms,watts\n0,5\n1000,abc\n");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(parse("\xEF\xBB\xBF" "elapsed_ms,watts\n0,5\n").size(), 1u);
}

TEST(Replay, ReproducesRecordedTraceBitForBit) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(100.0, 300.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<PowerSample> recorded;
    const int n = 1 + rep * 3;
    for (int i = 0; i < n; ++i) recorded.push_back({i * 60000LL, w(rng)});
    const auto original = PowerTrace::sealed_from("r", 60.0, recorded);

    std::stringstream csv;
    write_trace_csv(csv, original);
    const auto loaded = read_trace_csv(csv, "r", 60.0);
    std::vector<PowerSample> samples(loaded.samples().begin(), loaded.samples().end());

    const auto interval = interval_from_seconds(60.0);
    auto clock = std::make_shared<SimulatedClock>(ReplayBackend::horizon_for(samples, interval));
    auto backend = std::make_shared<ReplayBackend>(samples, clock, "mem");
    auto session = start_sampling(backend, clock, {.interval_s = 60.0});
    clock->settle();
    const auto replayed = session.stop_and_seal();

    ASSERT_EQ(replayed.size(), recorded.size());
    for (int i = 0; i < n; ++i) EXPECT_EQ(replayed.samples()[i], recorded[i]);
    EXPECT_EQ(rms_watts(replayed), rms_watts(original));
  }
}

TEST(Backends, SyntheticIsSeededAndPositive) {
  SyntheticDevice dev{.level_watts = 150.0, .noise_watts = 5.0};
  SyntheticBackend a(dev, 99), b(dev, 99), c(dev, 100);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.read_watts();
    EXPECT_EQ(x, b.read_watts());
    differs |= x != c.read_watts();
    EXPECT_GT(x, 0.0);
  }
  EXPECT_TRUE(differs);
}

TEST(Backends, SyntheticStartupFailure) {
  SyntheticBackend s({.fail_startup = true}, 1);
  EXPECT_THROW(s.read_watts(), TelemetryError);
}

TEST(Backends, NvmlUnavailableIsTelemetryError) {
  // No NVIDIA driver in CI; on a GPU host the backend must produce a positive reading.
  try {
    NvmlBackend nvml(0);
    EXPECT_GT(nvml.read_watts(), 0.0);
  } catch (const TelemetryError& e) {
    EXPECT_FALSE(std::string(e.what()).empty());
  }
  EXPECT_THROW(NvmlBackend(9999), TelemetryError);
}

TEST(Backends, KindNames) {
  EXPECT_EQ(backend_kind_from_string("live"), BackendKind::live);
  EXPECT_EQ(backend_kind_from_string("replay"), BackendKind::replay);
  EXPECT_EQ(to_string(BackendKind::synthetic), "synthetic");
  EXPECT_THROW(backend_kind_from_string("gpu"), ConfigError);
}
