# -*- coding: utf-8 -*-
from extensions.command_manager import Command
from apps.data.controller.synth_controller import synth_command

commandpatterns = [Command(synth_command, name='synth')]
