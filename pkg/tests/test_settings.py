#!/usr/bin/env python3
"""
Unit tests for engine settings read from the environment.
"""

import os
import sys
from unittest.mock import patch

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from src.errors import ConfigurationError, PreconditionError
from src.settings import EngineLimits, get_limits, read_env_variable


class TestReadEnvVariable:
    """Test suite for read_env_variable."""

    @patch.dict(os.environ, {}, clear=True)
    def test_default_when_unset(self):
        """Test the default for a missing variable."""
        assert read_env_variable('QUATGRAPH_MISSING', 7) == 7

    @patch.dict(os.environ, {'QUATGRAPH_EMPTY': '   '})
    def test_default_when_blank(self):
        """Test the default for a blank variable."""
        assert read_env_variable('QUATGRAPH_EMPTY', 7) == 7

    @patch.dict(os.environ, {'QUATGRAPH_VALUE': ' 42 '})
    def test_cast(self):
        """Test stripping and casting."""
        assert read_env_variable('QUATGRAPH_VALUE', 7) == 42
        assert read_env_variable('QUATGRAPH_VALUE', '7', cast=str) == '42'

    @patch.dict(os.environ, {'QUATGRAPH_VALUE': 'many'})
    def test_invalid(self):
        """Test that a value that does not cast is a configuration error."""
        with pytest.raises(ConfigurationError) as exc:
            read_env_variable('QUATGRAPH_VALUE', 7)
        assert 'QUATGRAPH_VALUE' in str(exc.value)
        assert isinstance(exc.value, PreconditionError)
        assert exc.value.exit_code == 2


class TestEngineLimits:
    """Test suite for EngineLimits and get_limits."""

    def setup_method(self):
        """Set up test fixtures before each test method."""
        get_limits.cache_clear()

    def teardown_method(self):
        """Drop limits cached under a patched environment."""
        get_limits.cache_clear()

    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self):
        """Test the built-in limits."""
        limits = EngineLimits.from_env()
        assert limits == EngineLimits()
        assert limits.algebra_search_bound == 512
        assert limits.saturation_limit == 64
        assert limits.class_limit == 10 ** 6
        assert limits.superorder_radius == 16

    @patch.dict(os.environ, {'QUATGRAPH_ALGEBRA_SEARCH_BOUND': '20', 'QUATGRAPH_CLASS_LIMIT': '5'})
    def test_overrides(self):
        """Test limits read from the environment."""
        limits = get_limits()
        assert limits.algebra_search_bound == 20
        assert limits.class_limit == 5
        assert get_limits() is limits

    @patch.dict(os.environ, {'QUATGRAPH_SATURATION_LIMIT': '1.5'})
    def test_bad_override(self):
        """Test that a non-integer limit is rejected."""
        with pytest.raises(ConfigurationError):
            get_limits()


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
