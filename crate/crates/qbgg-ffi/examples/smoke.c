/* Minimal C client: character and finite transfer matrix of sp_4, and error reporting. */
#include <stdio.h>
#include <string.h>

#include "qbgg.h"

int main(void) {
    QbggTwist *twist = NULL;
    if (qbgg_twist_new("C", 2, "2,3", &twist) != QBGG_STATUS_OK) {
        fprintf(stderr, "twist: %s\n", qbgg_last_error());
        return 1;
    }
    char *value = NULL;
    if (qbgg_character(twist, "symplectic", "1", &value) != QBGG_STATUS_OK) {
        fprintf(stderr, "character: %s\n", qbgg_last_error());
        return 1;
    }
    printf("character %s\n", value);
    int ok = strcmp(value, "28/3") == 0;
    qbgg_string_free(value);

    QbggOperator *op = NULL;
    if (qbgg_transfer_finite(twist, "symplectic", "1", 1, &op) != QBGG_STATUS_OK) {
        fprintf(stderr, "transfer: %s\n", qbgg_last_error());
        return 1;
    }
    char *json = NULL;
    qbgg_operator_to_json(op, &json);
    ok = ok && strstr(json, "\"K\":4") != NULL;
    qbgg_string_free(json);
    qbgg_operator_free(op);

    QbggStatus bad = qbgg_character(twist, "symplectic", "1/2", &value);
    ok = ok && bad == QBGG_STATUS_NOT_DOMINANT && strlen(qbgg_last_error()) > 0;
    qbgg_twist_free(twist);
    printf("%s (version %s)\n", ok ? "ok" : "MISMATCH", qbgg_version());
    return ok ? 0 : 1;
}
