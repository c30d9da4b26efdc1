#include "pfrontier.h"

#include <string>

#include "pfrontier/pipeline.hpp"
#include "pfrontier/types.hpp"

struct pf_config {
    pfrontier::RunConfig impl;
    mutable std::string get_buffer;
};

namespace {

thread_local std::string g_last_error;

int guard(int code, const std::string& message) {
    g_last_error = code == PF_OK ? "" : message;
    return code;
}

}  // namespace

extern "C" {

pf_config* pf_config_create(void) {
    return new (std::nothrow) pf_config();
}

void pf_config_free(pf_config* config) {
    delete config;
}

int pf_config_load(pf_config* config, const char* path) {
    if (!config || !path) return guard(PF_ERR_INPUT, "null argument");
    try {
        pfrontier::RunConfig loaded = pfrontier::load_config_file(path);
        for (const auto& [k, v] : loaded.values) config->impl.set(k, v);
        return guard(PF_OK, "");
    } catch (const pfrontier::ParseError& e) {
        return guard(PF_ERR_INPUT, e.what());
    } catch (const pfrontier::MissingDataError& e) {
        return guard(PF_ERR_INPUT, e.what());
    } catch (const std::exception& e) {
        return guard(PF_ERR_INTERNAL, e.what());
    }
}

int pf_config_set(pf_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return guard(PF_ERR_INPUT, "null argument");
    config->impl.set(key, value);
    return guard(PF_OK, "");
}

const char* pf_config_get(const pf_config* config, const char* key) {
    if (!config || !key) return nullptr;
    auto it = config->impl.values.find(key);
    if (it == config->impl.values.end()) return nullptr;
    config->get_buffer = it->second;
    return config->get_buffer.c_str();
}

int pf_run(const pf_config* config, const char* command) {
    if (!config || !command) return guard(PF_ERR_INPUT, "null argument");
    std::string error;
    int code = pfrontier::run_command(config->impl, command, &error);
    return guard(code, error);
}

const char* pf_last_error(void) {
    return g_last_error.c_str();
}

const char* pf_version(void) {
    return pfrontier::kVersion;
}

}  // extern "C"
