#include "olab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/exec.hpp"
#include "core/lp.hpp"
#include "core/value.hpp"

namespace {

thread_local std::string g_last_error;

olab_status fail(olab_status code, const char* msg) {
  g_last_error = msg;
  return code;
}

// Run `f`, translating exceptions to status codes + the thread-local message.
template <class F>
olab_status guarded(F&& f) {
  try {
    f();
    return OLAB_OK;
  } catch (const olab::Error& e) {
    g_last_error = e.what();
    return static_cast<olab_status>(static_cast<int>(e.code));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OLAB_ERR_INTERNAL;
  } catch (...) {
    return fail(OLAB_ERR_INTERNAL, "unidentified failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct olab_game {
  olab::GameSpec spec;
};

extern "C" {

const char* olab_version(void) { return "0.1.0"; }

const char* olab_last_error(void) { return g_last_error.c_str(); }

olab_status olab_game_parse(const char* json_text, olab_game** out) {
  if (json_text == nullptr || out == nullptr)
    return fail(OLAB_ERR_INVALID, "olab_game_parse: null argument");
  *out = nullptr;
  return guarded([&] {
    const olab::Json j = olab::parse_json_text(json_text, "game");
    *out = new olab_game{olab::game_from_json(j, "")};
  });
}

void olab_game_free(olab_game* game) { delete game; }

olab_status olab_exact_value(const olab_game* game, long long budget, double* out_value) {
  if (game == nullptr || out_value == nullptr)
    return fail(OLAB_ERR_INVALID, "olab_exact_value: null argument");
  return guarded([&] {
    olab::ValueOptions opts;
    if (budget > 0) opts.budget = budget;
    *out_value = olab::exact_value(game->spec, opts);
  });
}

olab_status olab_solve_matrix_game(const double* values, int nf, int nx, double* out_value,
                                   double* row_mix, double* col_mix) {
  if (values == nullptr || out_value == nullptr)
    return fail(OLAB_ERR_INVALID, "olab_solve_matrix_game: null argument");
  if (nf < 1 || nx < 1)
    return fail(OLAB_ERR_INVALID, "olab_solve_matrix_game: need nf >= 1 and nx >= 1");
  return guarded([&] {
    std::vector<std::vector<double>> m(static_cast<std::size_t>(nf));
    for (int f = 0; f < nf; ++f)
      m[static_cast<std::size_t>(f)].assign(values + static_cast<std::ptrdiff_t>(f) * nx,
                                            values + static_cast<std::ptrdiff_t>(f + 1) * nx);
    const auto sol = olab::solve_matrix_game_t<double>(m, 1e-11, 1e-9);
    *out_value = sol.value;
    if (row_mix != nullptr)
      std::memcpy(row_mix, sol.row_mix.data(), sizeof(double) * static_cast<std::size_t>(nf));
    if (col_mix != nullptr)
      std::memcpy(col_mix, sol.col_mix.data(), sizeof(double) * static_cast<std::size_t>(nx));
  });
}

olab_status olab_exec(const char* config_json, char** out_json) {
  if (config_json == nullptr || out_json == nullptr)
    return fail(OLAB_ERR_INVALID, "olab_exec: null argument");
  *out_json = nullptr;
  return guarded([&] {
    const std::string result = olab::exec_text(config_json);
    *out_json = dup_string(result);
    if (*out_json == nullptr) olab::fail_internal("olab_exec: out of memory");
  });
}

void olab_string_free(char* s) { std::free(s); }

}  // extern "C"
