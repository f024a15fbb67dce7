# app/models/__init__.py
"""Decision models: core process, closed-form strategies, cascades, observation and policies."""
