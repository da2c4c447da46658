/* C interface to the relhyp core: group constructions with exact word
 * problems, finite balls of relative / coset / coned-off / Bass-Serre graphs,
 * hyperbolicity estimation, quasi-isometry checks, and cycle decompositions.
 *
 * Conventions:
 *   - Handles are opaque; every rh_*_new / *_build output must be released
 *     with the matching free function.
 *   - Strings returned through char** are heap-allocated; release them with
 *     rh_string_free.
 *   - Functions return RH_OK on success; on failure rh_last_error() gives a
 *     thread-local message.
 *   - Words use the textual form "a b^-1 a^2"; "e" is the empty word.
 *   - Specs and options are JSON documents (schemas in the README).
 */

#ifndef RELHYP_H
#define RELHYP_H

#ifdef __cplusplus
extern "C" {
#endif

#define RH_API __attribute__((visibility("default")))

typedef enum rh_status {
  RH_OK = 0,
  RH_ERR_PARSE = 1,
  RH_ERR_ALPHABET = 2,
  RH_ERR_MEMBERSHIP = 3,
  RH_ERR_UNSUPPORTED = 4,
  RH_ERR_BUDGET = 5,
  RH_ERR_TRUNCATION = 6,
  RH_ERR_GATE = 7,
  RH_ERR_INVALID = 8,
  RH_ERR_INTERNAL = 9
} rh_status;

typedef struct rh_group rh_group;
typedef struct rh_graph rh_graph;

RH_API const char* rh_version(void);
RH_API const char* rh_last_error(void);
RH_API void rh_string_free(char* s);

/* Groups ------------------------------------------------------------- */

RH_API rh_status rh_group_new(const char* spec_json, rh_group** out);
RH_API void rh_group_free(rh_group* g);
RH_API rh_status rh_group_describe(const rh_group* g, char** out);
RH_API rh_status rh_group_alphabet(const rh_group* g, char** out_json);

RH_API rh_status rh_reduce(const rh_group* g, const char* word, char** out);
RH_API rh_status rh_is_identity(const rh_group* g, const char* word, int* out);
RH_API rh_status rh_canonical_key(const rh_group* g, const char* word, char** out);
RH_API rh_status rh_britton_reduce(const rh_group* g, const char* word, char** out);
/* JSON {found, begin, end, side} or {found:false}. */
RH_API rh_status rh_pinch_find(const rh_group* g, const char* word, char** out_json);

RH_API rh_status rh_subgroup_member(const rh_group* g, const char* subgroup_json,
                                    const char* word, int* out);
RH_API rh_status rh_subgroup_express(const rh_group* g, const char* subgroup_json,
                                     const char* word, char** out);

/* Balls ---------------------------------------------------------------
 * options JSON: {"kind":"relative"|"coset"|"coned"|"tree",
 *                "x":["a","t"], "parabolics":[subgroup specs],
 *                "radius":3, "rh":2, "budget":0, "exact_check":true}
 */

RH_API rh_status rh_ball_build(const rh_group* g, const char* options_json, rh_graph** out);
RH_API void rh_graph_free(rh_graph* g);
RH_API rh_status rh_graph_from_json(const char* json, rh_graph** out);
RH_API rh_status rh_graph_to_json(const rh_graph* g, char** out);
RH_API rh_status rh_graph_to_dot(const rh_graph* g, char** out);
RH_API rh_status rh_graph_info(const rh_graph* g, char** out_json);
RH_API rh_status rh_edge_orbit_witness(const rh_graph* g, int edge_a, int edge_b,
                                       char** out_word);

/* Hyperbolicity --------------------------------------------------------
 * options JSON: {"mode":"exact"|"basepoint"|"slim", "threads":0,
 *                "budget":200000}
 * series adds: {"radii":[3,4,5,6]} plus the ball options above.
 */

RH_API rh_status rh_delta(const rh_graph* g, const char* options_json, char** report_json);
RH_API rh_status rh_delta_series(const rh_group* g, const char* options_json,
                                 char** report_json, char** csv);

/* Quasi-isometry ------------------------------------------------------ */

RH_API rh_status rh_qi_eqdef(const rh_group* g, const char* options_json, char** report_json,
                             int* pass);
/* map JSON: [[u0, v0], [u1, v1], ...]; params: {"lambda":[2,1],"c":[1,2],
 * "epsilon":[1,1]}. */
RH_API rh_status rh_qi_check_map(const rh_graph* g1, const rh_graph* g2, const char* map_json,
                                 const char* params_json, char** report_json, int* pass);
RH_API rh_status rh_qi_lipschitz(const rh_graph* g1, const rh_graph* g2, const char* map_json,
                                 char** report_json, int* pass);

/* Isoperimetry ---------------------------------------------------------
 * The cycle is an identity word traced from the ball center.
 */

RH_API rh_status rh_fill_cycle(const rh_graph* g, const char* cycle_word, long long m_bound,
                               char** report_json);
RH_API rh_status rh_hnn_decompose(const rh_graph* g, const char* cycle_word, long long m_bound,
                                  char** report_json);
/* options: {"M":4,"L":[1,1],"samples":20,"max_len":12,"seed":0} */
RH_API rh_status rh_verify_ip(const rh_graph* g, const char* options_json, char** report_json);

/* Experiments ----------------------------------------------------------
 * files_json: {"files":{"name":"content",...},"summary":"...","pass":bool}
 */

RH_API rh_status rh_experiment(const char* name, unsigned seed, int threads, char** files_json,
                               int* pass);
RH_API rh_status rh_experiment_names(char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* RELHYP_H */
