"""Urgency prediction for discussion-forum posts on the 1-7 ordinal scale."""

__version__ = "0.1.0"
