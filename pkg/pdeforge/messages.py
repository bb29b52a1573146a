# Human-readable report messages for English and German
TRANSLATIONS = {
    "en": {
        # Verification
        "verify_pass": "All {total} inputs agree with the truth table.",
        "verify_fail": "{count} of {total} inputs disagree with the truth table.",
        "pde_value": "F(1_T) = {value} for T = {subset}.",

        # Circuits
        "search_converged": "Search converged with residual {residual:.3e} (seed {seed}).",
        "search_failed": "Search did not reach tolerance {tol:.1e}; best residual {residual:.3e} (seed {seed}).",
        "circuit_size": "Hypermatrix of shape {rho}x{d}x{width}, size {size}.",

        # Symmetric functions
        "cardinality_summary": "Cardinality PDP '{kind}' with s={s} over N={n} variables, degree {degree}.",

        # Orbits
        "orbit_summary": "Orbit of size {orbit} with {aut} automorphisms; {classes} classes on {n} vertices.",
        "iso_value": "Relation '{kind}' evaluates to {value}.",
        "certificate_none": "The graphs are not isomorphic; the certificate is 0.",
        "certificate_found": "Permutation {perm} maps S onto T.",
        "bounds_summary": "Lower bound {lower}; Polya count {polya}.",
        "prop3_pass": "Orbit list identity holds for N={n}, |S|={size}.",
        "prop3_fail": "Orbit list identity FAILED for N={n}, |S|={size}.",
        "resolvent_pass": "Every e_t(z) up to t={t_max} is univariate in the linear functional.",
        "resolvent_fail": "Some e_t(z) is not univariate in the linear functional.",

        # Matrix algebra
        "det_result": "Determinant computed with method '{method}'.",
        "perm_result": "Permanent computed by subset dynamic programming.",
        "matrix_bit": "Encoded polynomial coefficient is {value}; oracle says {oracle}.",
        "roots_pass": "Integer roots 1..{d_minus} confirmed, no spurious roots on the grid.",
        "roots_fail": "Integer roots check failed with {count} findings.",

        # Selftest
        "selftest_pass": "Suite '{suite}' passed ({passed}/{total} checks).",
        "selftest_fail": "Suite '{suite}' failed: {failed} of {total} checks did not pass.",

        # Errors
        "error_guard": "Input too large: {detail}",
        "error_input": "Invalid input: {detail}",
    },
    "de": {
        # Verifikation
        "verify_pass": "Alle {total} Eingaben stimmen mit der Wahrheitstabelle überein.",
        "verify_fail": "{count} von {total} Eingaben weichen von der Wahrheitstabelle ab.",
        "pde_value": "F(1_T) = {value} für T = {subset}.",

        # Schaltkreise
        "search_converged": "Suche konvergiert mit Residuum {residual:.3e} (Seed {seed}).",
        "search_failed": "Toleranz {tol:.1e} nicht erreicht; bestes Residuum {residual:.3e} (Seed {seed}).",
        "circuit_size": "Hypermatrix der Form {rho}x{d}x{width}, Größe {size}.",

        # Symmetrische Funktionen
        "cardinality_summary": "Kardinalitäts-PDP '{kind}' mit s={s} über N={n} Variablen, Grad {degree}.",

        # Orbits
        "orbit_summary": "Orbit der Größe {orbit} mit {aut} Automorphismen; {classes} Klassen auf {n} Knoten.",
        "iso_value": "Relation '{kind}' ergibt {value}.",
        "certificate_none": "Die Graphen sind nicht isomorph; das Zertifikat ist 0.",
        "certificate_found": "Permutation {perm} bildet S auf T ab.",
        "bounds_summary": "Untere Schranke {lower}; Pólya-Anzahl {polya}.",
        "prop3_pass": "Orbitlisten-Identität gilt für N={n}, |S|={size}.",
        "prop3_fail": "Orbitlisten-Identität FEHLGESCHLAGEN für N={n}, |S|={size}.",
        "resolvent_pass": "Jedes e_t(z) bis t={t_max} ist univariat im linearen Funktional.",
        "resolvent_fail": "Mindestens ein e_t(z) ist nicht univariat im linearen Funktional.",

        # Matrixalgebra
        "det_result": "Determinante berechnet mit Methode '{method}'.",
        "perm_result": "Permanente berechnet per Teilmengen-DP.",
        "matrix_bit": "Koeffizient des Polynoms ist {value}; Orakel liefert {oracle}.",
        "roots_pass": "Ganzzahlige Nullstellen 1..{d_minus} bestätigt, keine falschen Nullstellen im Gitter.",
        "roots_fail": "Nullstellenprüfung fehlgeschlagen mit {count} Befunden.",

        # Selbsttest
        "selftest_pass": "Suite '{suite}' bestanden ({passed}/{total} Prüfungen).",
        "selftest_fail": "Suite '{suite}' fehlgeschlagen: {failed} von {total} Prüfungen nicht bestanden.",

        # Fehler
        "error_guard": "Eingabe zu groß: {detail}",
        "error_input": "Ungültige Eingabe: {detail}",
    },
}


def get_text(lang_code, key, **fmt):
    """Retrieves the message for the given key and language code, formatted with fmt."""
    lang = TRANSLATIONS.get(lang_code, TRANSLATIONS["en"])
    text = lang.get(key, TRANSLATIONS["en"].get(key, f"[{key}]"))
    if fmt:
        try:
            return text.format(**fmt)
        except (KeyError, IndexError, ValueError):
            return text
    return text
