import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def interp_names(interp):
    return sorted(str(a) for a in interp)


def answer_names(sets):
    return sorted(interp_names(s) for s in sets)
