from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from bowditch import Generator, ImaginaryCharacter, MoveWord

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=12)
small_floats = st.floats(min_value=-6, max_value=6, allow_nan=False, allow_infinity=False)

exact_characters = st.builds(ImaginaryCharacter, small_rationals, small_rationals, small_rationals)
float_characters = st.builds(ImaginaryCharacter, small_floats, small_floats, small_floats)
generators = st.sampled_from(list(Generator))
words = st.lists(generators, max_size=32).map(lambda gs: MoveWord(tuple(gs)))


def frac(v):
    return Fraction(v)


# PASS/FAIL lines from the acceptance suite, echoed again in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
