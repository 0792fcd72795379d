#include <stdio.h>
#include <string.h>
#include "avdc.h"

int main(void) {
    const char *src = "d 3\nsigma 3\n2 0 1\n3 0 1\n3 2 1\n";
    AvdcAutomaton *aut = NULL;
    if (avdc_automaton_parse(src, &aut) != AVDC_STATUS_OK) return 1;
    AvdcSequence *seq = NULL;
    if (avdc_sequence_new(aut, &seq) != AVDC_STATUS_OK) return 2;
    char *x = NULL;
    if (avdc_sequence_value_decimal(seq, 1, 6, &x) != AVDC_STATUS_OK) return 3;
    printf("%s\n", x);
    int bad = strcmp(x, "0.445042") != 0;
    avdc_string_free(x);
    AvdcDecision dec;
    bool met = false;
    if (avdc_brs_decide(seq, "|0,1", &dec, &met) != AVDC_STATUS_OK) return 4;
    if (dec != AVDC_DECISION_UNBOUNDED || !met) return 5;
    if (avdc_automaton_parse("d 1\nsigma", &aut) != AVDC_STATUS_PARSE) return 6;
    if (avdc_last_error() == NULL) return 7;
    avdc_sequence_free(seq);
    avdc_automaton_free(aut);
    return bad;
}
