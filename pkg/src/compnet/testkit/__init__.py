"""Reference networks, hardness-reduction instances and brute-force oracles."""

from .fixtures import Expectation, Fixture, check_fixture, export_fixtures, fixture, fixture_names
from .oracles import cut_oracle, interdict_oracle, max_flow_path_oracle

__all__ = ["Expectation", "Fixture", "check_fixture", "cut_oracle", "export_fixtures",
           "fixture", "fixture_names", "interdict_oracle", "max_flow_path_oracle"]
