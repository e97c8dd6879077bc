# -*- coding: utf-8 -*-
from extensions.command_manager import Command
from apps.gradcheck.controller.gradcheck_controller import gradcheck_command

commandpatterns = [Command(gradcheck_command, name='gradcheck')]
