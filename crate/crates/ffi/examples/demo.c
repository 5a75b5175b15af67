#include <stdio.h>
#include "tweetcast.h"

int main(int argc, char **argv) {
    if (argc < 4) {
        fprintf(stderr, "usage: demo census.csv priors.csv apportionment.csv\n");
        return 1;
    }
    TcStateTable *table = NULL;
    if (tc_state_table_load(argv[1], argv[2], argv[3], NULL, &table) != TC_STATUS_OK) {
        fprintf(stderr, "load: %s\n", tc_last_error());
        return 2;
    }
    TcForecast *f = NULL;
    if (tc_forecast_run(table, 0.5, TC_MODEL_MODEL2, TC_WEIGHT_MODE_NORMALIZED, &f) != TC_STATUS_OK) {
        fprintf(stderr, "forecast: %s\n", tc_last_error());
        tc_state_table_free(table);
        return 2;
    }
    uint64_t ev[2], tied = 0, total = 0;
    double pv[2];
    tc_forecast_electoral_votes(f, ev, &tied, &total);
    tc_forecast_popular_vote(f, pv);
    printf("states=%zu ev=%llu,%llu tied=%llu total=%llu pv=%.4f\n", tc_forecast_state_count(f),
           (unsigned long long)ev[0], (unsigned long long)ev[1], (unsigned long long)tied,
           (unsigned long long)total, pv[0]);

    TcLexicon *lex = NULL;
    TcScore s;
    tc_lexicon_afinn111(&lex);
    tc_lexicon_score(lex, "good good bad", &s);
    printf("net=%lld\n", (long long)s.net);

    tc_lexicon_free(lex);
    tc_forecast_free(f);
    tc_state_table_free(table);
    return 0;
}
