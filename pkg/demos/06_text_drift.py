"""Compare two versions of a document.

Without an embedding table every token gets a deterministic hashed vector,
so the numbers are reproducible anywhere.
"""
from driftfield import text_drift

original = (
    "The committee reviewed the budget for road repairs, school lunches and the new library. "
    "Members agreed the library should open in spring and asked for a revised road plan."
) * 4
revised = (
    "The committee reviewed the budget. Road repairs were postponed and the library opening "
    "moved to autumn after members questioned contractor costs."
) * 3

for key, value in text_drift(original, revised).items():
    print(f"{key:>22}: {value}")
