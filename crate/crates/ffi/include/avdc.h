#ifndef AVDC_H
#define AVDC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Verdict of the bounded remainder set decision.
 */
typedef enum AvdcDecision {
  AVDC_DECISION_BOUNDED = 0,
  AVDC_DECISION_UNBOUNDED = 1,
} AvdcDecision;

/*
 Result code of every fallible call.
 */
typedef enum AvdcStatus {
  AVDC_STATUS_OK = 0,
  AVDC_STATUS_NULL_POINTER = 1,
  /*
   Malformed text: automaton file, word or UTF-8.
   */
  AVDC_STATUS_PARSE = 2,
  /*
   Well-formed input rejected by validation or a hypothesis check.
   */
  AVDC_STATUS_INVALID = 3,
  /*
   Internal consistency check failed.
   */
  AVDC_STATUS_INTERNAL = 4,
  AVDC_STATUS_PANIC = 5,
} AvdcStatus;

/*
 A validated totally ordered automaton.
 */
typedef struct AvdcAutomaton AvdcAutomaton;

/*
 The van der Corput sequence of a Pisot automaton, with discrepancy support when
 the spectral data are available.
 */
typedef struct AvdcSequence AvdcSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *avdc_last_error(void);

/*
 Parses the automaton text format.

 # Safety
 `src` must be a nul-terminated string and `out` a valid pointer.
 */
enum AvdcStatus avdc_automaton_parse(const char *src, struct AvdcAutomaton **out);

/*
 # Safety
 `aut` must come from this library and not be used afterwards; null is ignored.
 */
void avdc_automaton_free(struct AvdcAutomaton *aut);

/*
 Number of states `d` (the sink excluded) and alphabet size.

 # Safety
 `aut` must be a live handle; `d` and `sigma` valid pointers.
 */
enum AvdcStatus avdc_automaton_shape(const struct AvdcAutomaton *aut, size_t *d, size_t *sigma);

/*
 The mirror automaton as a new handle.

 # Safety
 `aut` must be a live handle and `out` a valid pointer.
 */
enum AvdcStatus avdc_automaton_mirror(const struct AvdcAutomaton *aut, struct AvdcAutomaton **out);

/*
 Membership of the word `letters[0..len]`.

 # Safety
 `letters` must point to `len` readable values (or be null with `len == 0`).
 */
enum AvdcStatus avdc_automaton_accepts(const struct AvdcAutomaton *aut,
                                       const uint32_t *letters,
                                       size_t len,
                                       bool *out);

/*
 Canonical text form; release with [`avdc_string_free`].

 # Safety
 `aut` must be a live handle and `out` a valid pointer.
 */
enum AvdcStatus avdc_automaton_to_string(const struct AvdcAutomaton *aut, char **out);

/*
 # Safety
 `s` must come from this library; null is ignored.
 */
void avdc_string_free(char *s);

/*
 Sequence of a Pisot automaton satisfying the smallest-letter hypothesis.

 # Safety
 `aut` must be a live handle and `out` a valid pointer.
 */
enum AvdcStatus avdc_sequence_new(const struct AvdcAutomaton *aut, struct AvdcSequence **out);

/*
 # Safety
 `seq` must come from this library and not be used afterwards; null is ignored.
 */
void avdc_sequence_free(struct AvdcSequence *seq);

/*
 `x_n` as a double.

 # Safety
 `seq` must be a live handle and `out` a valid pointer.
 */
enum AvdcStatus avdc_sequence_value(const struct AvdcSequence *seq, uint64_t n, double *out);

/*
 `x_n` as a decimal string with `digits` fractional digits (rounded half up);
 release with [`avdc_string_free`].

 # Safety
 `seq` must be a live handle and `out` a valid pointer.
 */
enum AvdcStatus avdc_sequence_value_decimal(const struct AvdcSequence *seq,
                                            uint64_t n,
                                            uint32_t digits,
                                            char **out);

/*
 Writes `x_0, …, x_{count-1}` to `out`.

 # Safety
 `out` must have room for `count` doubles.
 */
enum AvdcStatus avdc_sequence_fill(const struct AvdcSequence *seq, size_t count, double *out);

/*
 `D(N, [0, ⟨y⟩))` for `y` in `pre|per` syntax, as a double.

 # Safety
 `seq` must be a live handle, `y` a nul-terminated string, `out` a valid pointer.
 */
enum AvdcStatus avdc_discrepancy(const struct AvdcSequence *seq,
                                 const char *y,
                                 uint64_t n,
                                 double *out);

/*
 Decides whether `[0, ⟨u⟩)` is a bounded remainder set. `hypotheses_met` may be null.

 # Safety
 `seq` must be a live handle, `u` a nul-terminated string, `out` a valid pointer.
 */
enum AvdcStatus avdc_brs_decide(const struct AvdcSequence *seq,
                                const char *u,
                                enum AvdcDecision *out,
                                bool *hypotheses_met);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AVDC_H */
