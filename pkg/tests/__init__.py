"""Test suite for pytailbounds."""
