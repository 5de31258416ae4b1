#include "iomma/json_io.hpp"

namespace iomma {

void to_json(Json& j, const ProblemDims& d) { j = Json{{"m", d.m}, {"n", d.n}, {"k", d.k}}; }

void from_json(const Json& j, ProblemDims& d) {
    d = ProblemDims::make(j.at("m").get<std::int64_t>(), j.at("n").get<std::int64_t>(),
                          j.at("k").get<std::int64_t>());
}

void to_json(Json& j, const IOStats& s) {
    j = Json{{"reads", s.reads},
             {"writes", s.writes},
             {"fmas", s.fmas},
             {"peak_residency", s.peak_residency},
             {"io_total", s.io_total()}};
}

void from_json(const Json& j, IOStats& s) {
    j.at("reads").get_to(s.reads);
    j.at("writes").get_to(s.writes);
    j.at("fmas").get_to(s.fmas);
    j.at("peak_residency").get_to(s.peak_residency);
}

void to_json(Json& j, const PredictedIO& p) {
    j = Json{{"reads", p.reads},
             {"writes", p.writes},
             {"closed_form_reads", p.closed_form_reads},
             {"closed_form_writes", p.closed_form_writes},
             {"io_total", p.io_total()},
             {"effective", p.effective()},
             {"write_hidden", p.write_hidden()}};
}

void from_json(const Json& j, PredictedIO& p) {
    j.at("reads").get_to(p.reads);
    j.at("writes").get_to(p.writes);
    j.at("closed_form_reads").get_to(p.closed_form_reads);
    j.at("closed_form_writes").get_to(p.closed_form_writes);
}

void to_json(Json& j, const BoundReport& r) {
    j = Json{{"dims", r.dims},
             {"S", r.S},
             {"M", r.M},
             {"f_max", r.f_max},
             {"general_bound", r.general_bound},
             {"bound_M_eq_S", r.bound_M_eq_S},
             {"bound_M_eq_2S", r.bound_M_eq_2S},
             {"hong_kung_reference", r.hong_kung_reference},
             {"bound_AB", r.bound_AB}};
}

void from_json(const Json& j, BoundReport& r) {
    j.at("dims").get_to(r.dims);
    j.at("S").get_to(r.S);
    j.at("M").get_to(r.M);
    j.at("f_max").get_to(r.f_max);
    j.at("general_bound").get_to(r.general_bound);
    j.at("bound_M_eq_S").get_to(r.bound_M_eq_S);
    j.at("bound_M_eq_2S").get_to(r.bound_M_eq_2S);
    j.at("hong_kung_reference").get_to(r.hong_kung_reference);
    j.at("bound_AB").get_to(r.bound_AB);
}

void to_json(Json& j, const GotoParams& p) {
    j = Json{{"n_c", p.n_c}, {"k_c", p.k_c}, {"m_c", p.m_c}, {"n_r", p.n_r},
             {"m_r", p.m_r}, {"S2", p.S2},   {"S3", p.S3}};
}

void from_json(const Json& j, GotoParams& p) {
    j.at("n_c").get_to(p.n_c);
    j.at("k_c").get_to(p.k_c);
    j.at("m_c").get_to(p.m_c);
    j.at("n_r").get_to(p.n_r);
    j.at("m_r").get_to(p.m_r);
    j.at("S2").get_to(p.S2);
    j.at("S3").get_to(p.S3);
}

void to_json(Json& j, const GotoReport& r) {
    j = Json{{"l3_reads", r.l3_reads},         {"l2_reads", r.l2_reads},
             {"l3_reference", r.l3_reference}, {"l2_reference", r.l2_reference},
             {"l3_ratio", r.l3_ratio},         {"l2_ratio", r.l2_ratio},
             {"l3_suboptimal", r.l3_suboptimal}, {"l2_suboptimal", r.l2_suboptimal}};
}

void from_json(const Json& j, GotoReport& r) {
    j.at("l3_reads").get_to(r.l3_reads);
    j.at("l2_reads").get_to(r.l2_reads);
    j.at("l3_reference").get_to(r.l3_reference);
    j.at("l2_reference").get_to(r.l2_reference);
    j.at("l3_ratio").get_to(r.l3_ratio);
    j.at("l2_ratio").get_to(r.l2_ratio);
    j.at("l3_suboptimal").get_to(r.l3_suboptimal);
    j.at("l2_suboptimal").get_to(r.l2_suboptimal);
}

void to_json(Json& j, const PhaseReport& r) {
    j = Json{{"phase", r.index}, {"loads", r.loads}, {"stores", r.stores},     {"fmas", r.fmas},
             {"x", r.x},         {"y", r.y},         {"z", r.z},               {"lw_bound", r.lw_bound},
             {"resident_at_start", r.resident_at_start}};
}

void from_json(const Json& j, PhaseReport& r) {
    j.at("phase").get_to(r.index);
    j.at("loads").get_to(r.loads);
    j.at("stores").get_to(r.stores);
    j.at("fmas").get_to(r.fmas);
    j.at("x").get_to(r.x);
    j.at("y").get_to(r.y);
    j.at("z").get_to(r.z);
    j.at("lw_bound").get_to(r.lw_bound);
    j.at("resident_at_start").get_to(r.resident_at_start);
}

} // namespace iomma
