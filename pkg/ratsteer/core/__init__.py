"""Simulation, learning and experiment logic"""
