import math

import pytest

from syllarc.errors import InventoryError
from syllarc.inventory import load_inventory


def test_core_labels_present(inventory):
    for label in ("y", "oe", "a", "o", "u", "b", "d", "g_p", "g_v",
                  "ao", "eh", "e", "i"):
        assert label in inventory


def test_vowel_consonant_split_by_radius(inventory):
    for t in inventory:
        if t.is_vowel:
            assert t.rho <= 1.0, t.label
        else:
            assert t.rho > 1.0, t.label


def test_frontness_is_lower_half_plane(inventory):
    for t in inventory:
        assert t.is_front == (math.sin(t.theta) < 0.0), t.label
    assert inventory.get("y").is_front
    assert inventory.get("i").is_front
    assert not inventory.get("u").is_front
    assert not inventory.get("a").is_front  # theta = pi sits on the boundary


def test_velar_routing_follows_v2(inventory):
    _, c, _ = inventory.resolve_vcv("a", "g", "y")
    assert c.label == "g_p"
    _, c, _ = inventory.resolve_vcv("y", "g", "u")
    assert c.label == "g_v"
    # explicit allophone labels resolve to themselves
    _, c, _ = inventory.resolve_vcv("a", "g_p", "u")
    assert c.label == "g_p"


def test_consonant_recruitment_sets(inventory):
    assert inventory.get("b").articulators == (1, 2, 6)
    assert inventory.get("d").articulators == (1, 2, 3, 4)
    assert inventory.get("g_p").articulators == (1, 2, 3, 4)
    assert inventory.get("g_v").articulators == (1, 2, 3, 4)


def test_positions_match_polar_form(inventory):
    y = inventory.get("y")
    assert abs(y.position - y.rho * complex(math.cos(y.theta),
                                            math.sin(y.theta))) < 1e-12


def test_reduced_vowel(inventory):
    u = inventory.get("u")
    red = u.reduced()
    assert red.label == "u_red"
    assert abs(red.rho - 0.5 * u.rho) < 1e-12
    assert red.theta == u.theta
    with pytest.raises(InventoryError):
        inventory.get("b").reduced()


def test_unknown_label_raises(inventory):
    with pytest.raises(InventoryError):
        inventory.get("q")
    with pytest.raises(InventoryError):
        inventory.resolve_vcv("y", "d", "b")


def test_load_is_idempotent():
    a = load_inventory()
    b = load_inventory()
    assert {t.label for t in a} == {t.label for t in b}
