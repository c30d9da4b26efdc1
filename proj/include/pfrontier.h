#ifndef PFRONTIER_H
#define PFRONTIER_H

/* C interface to the pfrontier library. All functions are thread-compatible
 * but not thread-safe on a shared pf_config; pf_last_error is per-thread. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pf_config pf_config;

/* Exit / status codes shared with the CLI. */
enum {
    PF_OK = 0,
    PF_ERR_INPUT = 2,
    PF_ERR_EMPTY = 3,
    PF_ERR_INTERNAL = 4
};

/* Creates an empty configuration. Never returns NULL except on OOM. */
pf_config* pf_config_create(void);

void pf_config_free(pf_config* config);

/* Merges key/value pairs from a config file into `config`. Returns PF_OK or
 * an error code; details via pf_last_error(). */
int pf_config_load(pf_config* config, const char* path);

/* Sets (or overwrites) a single key. Returns PF_OK, or PF_ERR_INPUT on a
 * NULL argument. */
int pf_config_set(pf_config* config, const char* key, const char* value);

/* Returns the value for `key`, or NULL when unset. The pointer is owned by
 * `config` and is invalidated by the next pf_config_set/pf_config_load. */
const char* pf_config_get(const pf_config* config, const char* key);

/* Runs one command: "synth", "pindex", "frontier", "backtest" or "factor".
 * Returns PF_OK or an error code; details via pf_last_error(). */
int pf_run(const pf_config* config, const char* command);

/* Message for the most recent failing call on this thread; empty string when
 * the last call succeeded. The pointer stays valid until the next call. */
const char* pf_last_error(void);

const char* pf_version(void);

#ifdef __cplusplus
}
#endif

#endif
