from pdeforge.messages import TRANSLATIONS, get_text


def test_get_text_english():
    """Test retrieving an existing key for English."""
    assert get_text("en", "certificate_none") == TRANSLATIONS["en"]["certificate_none"]


def test_get_text_german():
    """Test retrieving an existing key for German."""
    assert get_text("de", "certificate_none") == TRANSLATIONS["de"]["certificate_none"]


def test_get_text_formats_arguments():
    """Placeholders are filled from keyword arguments."""
    assert get_text("en", "verify_pass", total=4) == "All 4 inputs agree with the truth table."


def test_get_text_missing_argument_returns_template():
    """A missing placeholder leaves the template unformatted."""
    assert get_text("en", "verify_fail", total=4) == TRANSLATIONS["en"]["verify_fail"]


def test_get_text_fallback_unsupported_language():
    """Test requesting a valid key for an unsupported language falls back to English."""
    assert get_text("fr", "perm_result") == TRANSLATIONS["en"]["perm_result"]


def test_get_text_none_language():
    """Test requesting None as language code falls back to English."""
    assert get_text(None, "perm_result") == TRANSLATIONS["en"]["perm_result"]


def test_get_text_missing_key():
    """Test requesting a non-existent key returns [key]."""
    assert get_text("en", "non_existent_key_12345") == "[non_existent_key_12345]"
    assert get_text("fr", "non_existent_key_12345") == "[non_existent_key_12345]"


def test_languages_share_keys():
    """Every English message has a German counterpart."""
    assert set(TRANSLATIONS["en"]) == set(TRANSLATIONS["de"])
