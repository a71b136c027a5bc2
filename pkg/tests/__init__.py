"""Test suite for ratsteer"""
