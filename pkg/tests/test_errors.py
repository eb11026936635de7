from src.errors import BranchTrackingError, DomainTooLargeError, InvalidPolynomialError, OverlapError


def test_error_codes_are_stable():
    assert OverlapError("x").code == "branch_overlap"
    assert InvalidPolynomialError("x").code == "invalid_polynomial"


def test_to_dict_carries_context():
    assert BranchTrackingError("lost", radius=0.01).to_dict() == {
        "error": "branch_tracking",
        "detail": "lost",
        "radius": 0.01,
    }
    assert DomainTooLargeError("far", z=1 + 2j).to_dict()["z"] == [1.0, 2.0]
    assert InvalidPolynomialError("bad", field="d").to_dict()["field"] == "d"
