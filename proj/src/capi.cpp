#include "fno/fno.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "fno/commands.hpp"

struct fno_grid {
  fno::GridPtr grid;
};

struct fno_number {
  fno::FuzzyNCell value;
};

struct fno_problem {
  fno::ProblemFile file;
};

struct fno_report {
  fno::CommandOutcome outcome;
  std::string json;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_kind;
thread_local std::optional<fno::ErrorKind> last_error_kind;

void clear_error() {
  last_error.clear();
  last_kind.clear();
  last_error_kind.reset();
}

fno_code record(const fno::Error& e) {
  last_error = e.what();
  last_kind = std::string(fno::to_string(e.kind()));
  last_error_kind = e.kind();
  return static_cast<fno_code>(fno::exit_code_for(e.kind()));
}

fno_code record_internal(const char* what) {
  last_error = what;
  last_kind = "InternalError";
  last_error_kind.reset();
  return FNO_INTERNAL_ERROR;
}

// Runs `body`, translating exceptions into codes.
template <class F>
fno_code guarded(F&& body) {
  clear_error();
  try {
    body();
    return FNO_OK;
  } catch (const fno::Error& e) {
    return record(e);
  } catch (const std::bad_alloc&) {
    return record_internal("out of memory");
  } catch (const std::exception& e) {
    return record_internal(e.what());
  }
}

fno_code null_argument() {
  return record(fno::Error(fno::ErrorKind::InvalidInput, "null argument"));
}

std::vector<double> to_vector(fno_vec v) {
  if (!v.data || v.size == 0) return {};
  return std::vector<double>(v.data, v.data + v.size);
}

}  // namespace

extern "C" {

const char* fno_version(void) { return "1.0.0"; }
const char* fno_last_error(void) { return last_error.c_str(); }
const char* fno_last_error_kind(void) { return last_kind.c_str(); }

fno_code fno_grid_uniform(size_t count, fno_grid** out) {
  if (!out) return null_argument();
  return guarded([&] {
    if (count < 2) throw fno::Error(fno::ErrorKind::InvalidInput, "a grid needs at least two levels");
    *out = new fno_grid{fno::LevelGrid::uniform(count)};
  });
}

fno_code fno_grid_from_levels(const double* levels, size_t count, fno_grid** out) {
  if (!out || !levels) return null_argument();
  return guarded([&] {
    *out = new fno_grid{fno::LevelGrid::from_levels(std::vector<double>(levels, levels + count))};
  });
}

void fno_grid_free(fno_grid* grid) { delete grid; }
size_t fno_grid_size(const fno_grid* grid) { return grid ? grid->grid->size() : 0; }
double fno_grid_level(const fno_grid* grid, size_t k) {
  return grid && k < grid->grid->size() ? (*grid->grid)[k] : 0.0;
}

fno_code fno_number_from_endpoints(const fno_grid* grid, size_t cells, const double* lo,
                                   const double* hi, fno_number** out) {
  if (!grid || !lo || !hi || !out) return null_argument();
  return guarded([&] {
    const size_t size = cells * grid->grid->size();
    *out = new fno_number{fno::FuzzyNCell::from_endpoints(grid->grid, cells,
                                                          std::vector<double>(lo, lo + size),
                                                          std::vector<double>(hi, hi + size))};
  });
}

fno_code fno_number_crisp(const fno_grid* grid, const double* point, size_t n, fno_number** out) {
  if (!grid || !point || !out) return null_argument();
  return guarded([&] {
    *out = new fno_number{fno::make_crisp(std::span<const double>(point, n), grid->grid)};
  });
}

fno_code fno_number_triangular(const fno_grid* grid, double l, double c, double u, fno_number** out) {
  if (!grid || !out) return null_argument();
  return guarded([&] { *out = new fno_number{fno::make_triangular(l, c, u, grid->grid)}; });
}

void fno_number_free(fno_number* u) { delete u; }
size_t fno_number_cells(const fno_number* u) { return u ? u->value.cells() : 0; }
size_t fno_number_levels(const fno_number* u) { return u ? u->value.levels() : 0; }

fno_code fno_number_endpoints(const fno_number* u, size_t cell, double* lo, double* hi) {
  if (!u || !lo || !hi) return null_argument();
  return guarded([&] {
    if (cell >= u->value.cells()) throw fno::Error(fno::ErrorKind::IndexOutOfRange, "cell index out of range");
    const auto l = u->value.lower(cell);
    const auto h = u->value.upper(cell);
    std::copy(l.begin(), l.end(), lo);
    std::copy(h.begin(), h.end(), hi);
  });
}

fno_code fno_number_add(const fno_number* u, const fno_number* v, fno_number** out) {
  if (!u || !v || !out) return null_argument();
  return guarded([&] { *out = new fno_number{fno::add(u->value, v->value)}; });
}

fno_code fno_number_scale(double k, const fno_number* u, fno_number** out) {
  if (!u || !out) return null_argument();
  return guarded([&] { *out = new fno_number{fno::scale(k, u->value)}; });
}

fno_code fno_number_mul(const fno_number* u, const fno_number* v, fno_number** out) {
  if (!u || !v || !out) return null_argument();
  return guarded([&] { *out = new fno_number{fno::mul(u->value, v->value)}; });
}

fno_code fno_number_gdiff(const fno_number* u, const fno_number* v, fno_number** out) {
  if (!u || !v || !out) return null_argument();
  return guarded([&] { *out = new fno_number{fno::g_diff(u->value, v->value)}; });
}

fno_code fno_number_distance(const fno_number* u, const fno_number* v, double* out) {
  if (!u || !v || !out) return null_argument();
  return guarded([&] { *out = fno::distance(u->value, v->value); });
}

fno_code fno_number_order(const fno_number* u, const fno_number* v, double tol, fno_relation* out) {
  if (!u || !v || !out) return null_argument();
  return guarded([&] {
    switch (fno::order(u->value, v->value, tol).relation) {
      case fno::Relation::LE: *out = FNO_LE; break;
      case fno::Relation::GE: *out = FNO_GE; break;
      case fno::Relation::EQ: *out = FNO_EQ; break;
      case fno::Relation::Incomparable: *out = FNO_INCOMPARABLE; break;
    }
  });
}

fno_code fno_number_to_csv(const fno_number* u, char** out) {
  if (!u || !out) return null_argument();
  return guarded([&] {
    const std::string csv = fno::to_csv(u->value);
    char* buf = new char[csv.size() + 1];
    std::memcpy(buf, csv.c_str(), csv.size() + 1);
    *out = buf;
  });
}

void fno_string_free(char* s) { delete[] s; }

fno_code fno_problem_load_file(const char* path, fno_problem** out) {
  if (!path || !out) return null_argument();
  return guarded([&] { *out = new fno_problem{fno::load_problem(path)}; });
}

fno_code fno_problem_load_string(const char* json, fno_problem** out) {
  if (!json || !out) return null_argument();
  return guarded([&] { *out = new fno_problem{fno::parse_problem(json)}; });
}

void fno_problem_free(fno_problem* p) { delete p; }
size_t fno_problem_domain_dim(const fno_problem* p) { return p ? p->file.domain_dim : 0; }
size_t fno_problem_cell_dim(const fno_problem* p) { return p ? p->file.cell_dim : 0; }
size_t fno_problem_constraint_count(const fno_problem* p) {
  return p ? p->file.constraint_count() : 0;
}

void fno_request_init(fno_request* req) {
  if (req) *req = fno_request{};
}

fno_code fno_run(const fno_problem* p, const fno_request* req, fno_report** out) {
  if (!p || !req || !req->command || !out) return null_argument();
  clear_error();
  try {
    fno::CommandRequest r;
    r.command = req->command;
    if (req->function) r.function = req->function;
    r.at = to_vector(req->at);
    r.other = to_vector(req->other);
    r.dir = to_vector(req->dir);
    r.lambda = to_vector(req->lambda);
    r.from = to_vector(req->from);
    if (req->side) r.side = req->side;
    if (req->candidate) r.candidate = req->candidate;
    if (req->has_seed) r.seed = req->seed;
    auto report = std::make_unique<fno_report>();
    report->outcome = fno::run_command(p->file, r);
    report->json = report->outcome.report.dump(2);
    if (report->outcome.status == "error") {
      last_error = report->outcome.report["error"]["message"].get<std::string>();
      last_kind = report->outcome.report["error"]["kind"].get<std::string>();
    }
    *out = report.release();
    return static_cast<fno_code>((*out)->outcome.exit_code);
  } catch (const std::bad_alloc&) {
    return record_internal("out of memory");
  } catch (const std::exception& e) {
    return record_internal(e.what());
  }
}

fno_code fno_error_report(const char* command, fno_report** out) {
  if (!out) return null_argument();
  try {
    const fno::ErrorKind kind = last_error_kind.value_or(fno::ErrorKind::InvalidInput);
    auto report = std::make_unique<fno_report>();
    report->outcome = fno::error_outcome(command ? command : "", fno::Error(kind, last_error));
    report->json = report->outcome.report.dump(2);
    *out = report.release();
    return static_cast<fno_code>((*out)->outcome.exit_code);
  } catch (const std::exception& e) {
    return record_internal(e.what());
  }
}

void fno_report_free(fno_report* r) { delete r; }
const char* fno_report_status(const fno_report* r) { return r ? r->outcome.status.c_str() : ""; }
fno_code fno_report_code(const fno_report* r) {
  return r ? static_cast<fno_code>(r->outcome.exit_code) : FNO_INTERNAL_ERROR;
}
const char* fno_report_json(const fno_report* r) { return r ? r->json.c_str() : ""; }
const char* fno_report_csv(const fno_report* r) {
  return r && r->outcome.csv ? r->outcome.csv->c_str() : nullptr;
}

}  // extern "C"
