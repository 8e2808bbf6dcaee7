#include "ppdsim/clinical.hpp"

namespace ppdsim {

namespace {

void emit(std::vector<Event>* log, std::uint32_t round, std::uint32_t id, EventKind kind,
          int phase = 0, CheckupTrigger trig = CheckupTrigger::none,
          DeathContext death = DeathContext::none) {
    if (!log)
        return;
    Event e;
    e.round = round;
    e.individual = id;
    e.kind = kind;
    e.phase = static_cast<std::uint8_t>(phase);
    e.trigger = trig;
    e.death_context = death;
    log->push_back(e);
}

} // namespace

CheckupOutcome perform_checkup(PopulationState& pop, std::uint32_t id,
                               const GroupClinicalParams& gp, CheckupTrigger trigger,
                               std::vector<Event>* log) {
    Individual& ind = pop.individuals[id];
    ind.rounds_since_checkup = 0;
    CheckupOutcome out;
    out.trigger = trigger;
    if (!ind.has_latent()) {
        out.kind = CheckupOutcome::Kind::no_disease;
        emit(log, pop.round, id, EventKind::checkup, 0, trigger);
        return out;
    }
    int phase = ind.latent_phase;
    if (trigger == CheckupTrigger::policy && !detectable_by_policy(*ind.latent()))
        out.trigger = CheckupTrigger::symptom; // same-round race: route as symptomatic
    out.kind = CheckupOutcome::Kind::diagnosed;
    out.phase = phase;

    TreatmentCourse course;
    course.phase_at_diagnosis = phase;
    course.rounds_remaining = gp.treat_duration[static_cast<std::size_t>(phase - 1)];
    course.will_recover =
        rng_bernoulli(ind.clin_rng, gp.recover_prob[static_cast<std::size_t>(phase - 1)]);
    ind.clear_latent();
    ind.set_treatment(course);
    pop.set_status(id, sick_status(phase));
    emit(log, pop.round, id, EventKind::diagnosis, phase, out.trigger);
    return out;
}

void step_individual(PopulationState& pop, std::uint32_t id,
                     const GroupClinicalParams& gp, bool checkup_today,
                     std::vector<Event>* log) {
    Individual& ind = pop.individuals[id];
    if (!ind.alive())
        return;
    const ClinicalStatus alpha_entry = ind.alpha;

    // 1. natural-death clock
    if (--ind.gamma == 0) {
        pop.set_status(id, ClinicalStatus::D);
        emit(log, pop.round, id, EventKind::natural_death);
        return;
    }

    // 2. latent onset
    bool latent_is_new = false;
    if (!ind.has_latent() &&
        (ind.alpha == ClinicalStatus::H || is_recovered(ind.alpha))) {
        double p = ind.alpha == ClinicalStatus::H
                       ? gp.onset_prob
                       : gp.recurrence_prob[static_cast<std::size_t>(phase_of(ind.alpha) - 1)];
        if (p > 0.0 && rng_bernoulli(ind.clin_rng, p)) {
            LatentDisease l;
            l.phase = 1;
            l.rounds_in_phase = 0;
            l.is_recurrence = is_recovered(ind.alpha);
            if (l.is_recurrence)
                l.origin_phase = phase_of(ind.alpha);
            ind.set_latent(l);
            latent_is_new = true;
            emit(log, pop.round, id, EventKind::onset, 1);
        }
    }

    // 3. latent progression / untreated death
    if (ind.has_latent() && !latent_is_new) {
        ++ind.latent_rounds;
        int phase = ind.latent_phase;
        if (phase < 4) {
            if (ind.latent_rounds >=
                static_cast<std::uint32_t>(gp.phase_duration[static_cast<std::size_t>(phase - 1)])) {
                ind.latent_phase = static_cast<std::uint8_t>(phase + 1);
                ind.latent_rounds = 0;
                emit(log, pop.round, id, EventKind::progression, phase + 1);
            }
        } else if (ind.latent_rounds >=
                   static_cast<std::uint32_t>(gp.phase_duration[3])) {
            pop.set_status(id, ClinicalStatus::D, DeathContext::latent);
            emit(log, pop.round, id, EventKind::disease_death, 4, CheckupTrigger::none,
                 DeathContext::latent);
            return;
        }
    }

    // 4. symptoms force a check-up regardless of the policy
    bool symptomatic = false;
    if (ind.has_latent()) {
        double p = gp.symptom_prob[static_cast<std::size_t>(ind.latent_phase - 1)];
        symptomatic = p >= 1.0 || (p > 0.0 && rng_bernoulli(ind.clin_rng, p));
    }

    // 5. check-up
    bool treatment_is_new = false;
    if ((symptomatic || checkup_today) &&
        (ind.alpha == ClinicalStatus::H || is_recovered(ind.alpha))) {
        CheckupOutcome out = perform_checkup(
            pop, id, gp, symptomatic ? CheckupTrigger::symptom : CheckupTrigger::policy,
            log);
        treatment_is_new = out.kind == CheckupOutcome::Kind::diagnosed;
    }

    // 6. treatment countdown
    if (is_sick(ind.alpha) && !treatment_is_new) {
        if (--ind.treat_rounds_remaining == 0) {
            int phase = ind.treat_phase;
            if (ind.treat_will_recover) {
                ind.clear_treatment();
                pop.set_status(id, recovered_status(phase));
                ind.rounds_since_checkup = 0; // surveillance clock starts at recovery
                emit(log, pop.round, id, EventKind::recovery, phase);
            } else {
                pop.set_status(id, ClinicalStatus::D, DeathContext::treatment);
                emit(log, pop.round, id, EventKind::disease_death, phase,
                     CheckupTrigger::none, DeathContext::treatment);
                return;
            }
        }
    }

    if (ind.alpha == alpha_entry)
        ++ind.tau;
}

} // namespace ppdsim
