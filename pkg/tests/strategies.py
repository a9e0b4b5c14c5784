"""Hypothesis strategies built on the seeded generators."""

import random

from hypothesis import strategies as st

from irew.generators import random_ground_term, random_ired_cert, random_rational_term

seeds = st.integers(min_value=0, max_value=2**32 - 1)
ground_terms = seeds.map(lambda s: random_ground_term(random.Random(s), 3))
rational_terms = seeds.map(lambda s: random_rational_term(random.Random(s)))
ired_certs = seeds.map(lambda s: random_ired_cert(random.Random(s)))
