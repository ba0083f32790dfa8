#include <dlfcn.h>

#include <string>

#include "wattmark/errors.hpp"
#include "wattmark/power/telemetry.hpp"

namespace wattmark::power {
namespace {

// Subset of nvml.h; the ABI of these entry points is stable across driver releases.
using nvmlReturn_t = int;
using nvmlDevice_t = struct nvmlDevice_st*;
constexpr nvmlReturn_t kNvmlSuccess = 0;

using InitFn = nvmlReturn_t (*)();
using ShutdownFn = nvmlReturn_t (*)();
using HandleByIndexFn = nvmlReturn_t (*)(unsigned, nvmlDevice_t*);
using PowerUsageFn = nvmlReturn_t (*)(nvmlDevice_t, unsigned*);
using NameFn = nvmlReturn_t (*)(nvmlDevice_t, char*, unsigned);
using ErrorStringFn = const char* (*)(nvmlReturn_t);

template <typename Fn>
Fn resolve(void* handle, const char* symbol) {
  void* sym = ::dlsym(handle, symbol);
  if (sym == nullptr) {
    throw TelemetryError(std::string("NVML symbol missing: ") + symbol);
  }
  return reinterpret_cast<Fn>(sym);
}

}  // namespace

struct NvmlBackend::Library {
  void* handle = nullptr;
  bool initialized = false;
  ShutdownFn shutdown = nullptr;
  PowerUsageFn power_usage = nullptr;
  ErrorStringFn error_string = nullptr;
  nvmlDevice_t device = nullptr;

  std::string describe_error(nvmlReturn_t rc) const {
    if (error_string != nullptr) return error_string(rc);
    return "NVML error " + std::to_string(rc);
  }

  ~Library() {
    if (initialized && shutdown != nullptr) shutdown();
    if (handle != nullptr) ::dlclose(handle);
  }
};

NvmlBackend::NvmlBackend(unsigned device_index)
    : lib_(std::make_unique<Library>()), device_index_(device_index) {
  lib_->handle = ::dlopen("libnvidia-ml.so.1", RTLD_NOW | RTLD_LOCAL);
  if (lib_->handle == nullptr) {
    const char* why = ::dlerror();
    throw TelemetryError(std::string("GPU management library unavailable: ") +
                         (why != nullptr ? why : "libnvidia-ml.so.1 not found"));
  }
  auto init = resolve<InitFn>(lib_->handle, "nvmlInit_v2");
  lib_->shutdown = resolve<ShutdownFn>(lib_->handle, "nvmlShutdown");
  auto by_index = resolve<HandleByIndexFn>(lib_->handle, "nvmlDeviceGetHandleByIndex_v2");
  lib_->power_usage = resolve<PowerUsageFn>(lib_->handle, "nvmlDeviceGetPowerUsage");
  lib_->error_string = resolve<ErrorStringFn>(lib_->handle, "nvmlErrorString");
  auto get_name = resolve<NameFn>(lib_->handle, "nvmlDeviceGetName");

  if (auto rc = init(); rc != kNvmlSuccess) {
    throw TelemetryError("nvmlInit failed: " + lib_->describe_error(rc));
  }
  lib_->initialized = true;
  if (auto rc = by_index(device_index, &lib_->device); rc != kNvmlSuccess) {
    throw TelemetryError("GPU " + std::to_string(device_index) +
                         " not reachable: " + lib_->describe_error(rc));
  }
  char name[96] = {};
  if (get_name(lib_->device, name, sizeof(name)) == kNvmlSuccess) device_name_ = name;
}

NvmlBackend::~NvmlBackend() = default;

std::string NvmlBackend::describe() const {
  return "nvml device " + std::to_string(device_index_) +
         (device_name_.empty() ? "" : " (" + device_name_ + ")");
}

double NvmlBackend::read_watts() {
  unsigned milliwatts = 0;
  if (auto rc = lib_->power_usage(lib_->device, &milliwatts); rc != kNvmlSuccess) {
    throw TelemetryError("power read failed: " + lib_->describe_error(rc));
  }
  if (milliwatts == 0) throw TelemetryError("power read returned 0 mW");
  return static_cast<double>(milliwatts) / 1000.0;
}

}  // namespace wattmark::power
