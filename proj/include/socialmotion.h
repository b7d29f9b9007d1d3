/* socialmotion — joint human motion and pose forecasting toolkit.
 *
 * C interface to the forecasting core. All functions return a status code
 * (SMF_OK on success); on failure smf_last_error() describes what went wrong
 * for the calling thread. Objects returned through out-parameters are owned
 * by the caller and released with the matching *_free function.
 */
#ifndef SOCIALMOTION_H
#define SOCIALMOTION_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SMF_OK 0
#define SMF_ERR_USAGE 1   /* bad arguments or configuration */
#define SMF_ERR_DATA 2    /* unreadable or malformed files */
#define SMF_ERR_NUMERIC 3 /* non-finite values, failed gradient check */

const char* smf_version(void);

/* Message for the most recent failure on this thread. */
const char* smf_last_error(void);

/* ---- scenes -------------------------------------------------------- */

typedef struct smf_scene smf_scene;

int smf_scene_load(const char* path, smf_scene** out);
int smf_scene_parse(const char* text, size_t len, smf_scene** out);
int smf_scene_save(const smf_scene* scene, const char* path);
void smf_scene_free(smf_scene* scene);

const char* smf_scene_id(const smf_scene* scene);
size_t smf_scene_person_count(const smf_scene* scene);
size_t smf_scene_frame_count(const smf_scene* scene);
size_t smf_scene_joint_count(const smf_scene* scene);
size_t smf_scene_dims(const smf_scene* scene);
double smf_scene_frame_rate(const smf_scene* scene);

/* ---- models -------------------------------------------------------- */

typedef struct smf_model smf_model;

int smf_model_load(const char* checkpoint_path, smf_model** out);
void smf_model_free(smf_model* model);
const char* smf_model_variant(const smf_model* model);

/* Forecasts the scene's future from its first t_obs frames. context_spec is
 * "zero", "scene" or the path of a context feature file. The prediction is a
 * new scene holding t_pred frames per person. */
int smf_model_forecast(const smf_model* model, const smf_scene* scene,
                       const char* context_spec, smf_scene** out_prediction);

/* ---- experiment commands ------------------------------------------- */

/* Writes `count` synthetic scene files plus a split manifest into out_dir.
 * scenario is approach|react|mirror|independent; options_json may be NULL or
 * a JSON object tuning the generator (see the project README). */
int smf_generate(const char* scenario, size_t count, uint64_t seed, const char* out_dir,
                 const char* options_json);

/* Trains per the experiment config file; writes checkpoint.smf and
 * history.csv into the configured output directory. overrides are
 * "dotted.key=value" pairs applied on top of the file. */
int smf_train(const char* config_path, const char* const* overrides, size_t n_overrides);

/* Evaluates the configured methods on the test split; writes report.csv,
 * curves.csv and report_groups.csv. checkpoint_path may be NULL when only
 * closed-form baselines are requested. */
int smf_evaluate(const char* config_path, const char* checkpoint_path,
                 const char* const* overrides, size_t n_overrides);

/* Finite-difference check of the end-to-end training gradients at toy
 * dimensions over n_seeds seeds. Writes the largest relative error to
 * *max_rel_error; returns SMF_ERR_NUMERIC if it exceeds tolerance. */
int smf_gradcheck(uint64_t seed, size_t n_seeds, double tolerance, double* max_rel_error);

#ifdef __cplusplus
}
#endif

#endif /* SOCIALMOTION_H */
