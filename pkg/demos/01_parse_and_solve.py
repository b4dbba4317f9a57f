# Parse a specification, build the synthesis game, and inspect the
# winning region.
from pathlib import Path

from gr1report import parse_spec, validate_gr1_shape, compile_to_boolean
from gr1report.game import build_game, solve_game, check_realizability

SPECS = Path(__file__).resolve().parent.parent / "specs"

text = (SPECS / "mutex.spec").read_text()
doc = parse_spec(text)
print("inputs: ", [v.name for v in doc.inputs()])
print("outputs:", [v.name for v in doc.outputs()])

# Shape violations are data, not exceptions; a clean document compiles.
print("violations:", validate_gr1_shape(doc))
spec = compile_to_boolean(doc)
print("propositions:", spec.props)

game = build_game(spec)
region = solve_game(game)
print("realizable:", check_realizability(game, region))

# The winning set is a BDD over the unprimed propositions; count the
# models to see how many of the 2^6 positions the system can win from.
n_win = game.mgr.count_models(region.win, game.positions)
print(f"winning positions: {n_win} / {1 << len(game.positions)}")

# Reactive distances come from the recorded fixpoint strata.
from gr1report.game import reactive_distance
pos = {p: False for p in game.positions}
print("distance of the all-false position to goal 0:",
      reactive_distance(region, pos, 0))
